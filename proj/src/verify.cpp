#include "gsma/verify.hpp"

#include <Eigen/Dense>

#include <random>

#include "gsma/composite.hpp"
#include "gsma/direct.hpp"
#include "gsma/errors.hpp"
#include "gsma/generalized.hpp"
#include "gsma/problems.hpp"
#include "gsma/random_instances.hpp"
#include "gsma/sherman_morrison.hpp"

namespace gsma {

namespace {

Complex random_shift(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  return {dist(rng), dist(rng)};
}

struct CheckAccumulator {
  VerifyCheck check;
  explicit CheckAccumulator(std::string name, double tol) {
    check.name = std::move(name);
    check.tolerance = tol;
  }
  void record(double deviation) { check.max_deviation = std::max(check.max_deviation, deviation); }
  VerifyCheck finish() {
    check.pass = check.max_deviation <= check.tolerance;
    return check;
  }
};

}  // namespace

VerifyReport run_identity_suite(const VerifyOptions& options) {
  VerifyReport report;
  const double fault = options.fault;

  CheckAccumulator classical_eq("classical-equivalence (canonical embedding)", 1e-12);
  CheckAccumulator invariance("subspace-shift invariance of A_rr + H", 1e-10);
  CheckAccumulator fn_identity("N = M^{-1} + λI against independent V-bar", 1e-10);
  CheckAccumulator hn_identity("H(λ) = N - A_rr", 1e-10);
  CheckAccumulator smw_path("low-rank-update path equals dense H", 1e-9);
  CheckAccumulator composite_path("composite H equals monolithic H", 1e-10);

  for (int s = 0; s < options.seed_count; ++s) {
    std::mt19937_64 rng(options.seed + 1000003ull * static_cast<std::uint64_t>(s));

    // classical equivalence
    for (int rep = 0; rep < 10; ++rep) {
      const Index m = 6 + static_cast<Index>(rng() % 15);
      const Index n = 1 + static_cast<Index>(rng() % 4);
      PartitionedSystem sys = random_partitioned_system(rng(), m, n);
      auto [pencil, pair] = canonical_embedding(sys);
      const Complex lambda = random_shift(rng);
      Matrix hc = h_classical(sys, lambda);
      const Matrix hg = h_general(pencil, pair, lambda);
      if (fault != 0.0) hc.array() += fault;
      classical_eq.record((hg - hc).norm() / std::max(norm_inf(sys.assemble()), 1.0));
    }

    // invariance under E ← E + (I-E)L and F ← F + (I-E)M
    for (int rep = 0; rep < 10; ++rep) {
      const Index m = 6 + static_cast<Index>(rng() % 10);
      const Index rank = 2 + static_cast<Index>(rng() % (m - 3));
      ProjectionPencil pencil = random_projection_pencil(rng(), m, rank);
      const Index n = 1 + static_cast<Index>(rng() % 2);
      SubspacePair pair = random_normalized_pair(rng(), pencil, n, true);
      const Complex lambda = random_shift(rng);
      Matrix base = reduced_a(pencil, pair) + h_general(pencil, pair, lambda);

      std::normal_distribution<double> gauss;
      Matrix L(m, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) L(i, j) = Complex(gauss(rng), gauss(rng));
      SubspacePair shifted = invariance_shift(pair, pencil, L, InvarianceSide::right);
      Matrix L2(m, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) L2(i, j) = Complex(gauss(rng), gauss(rng));
      shifted = invariance_shift(shifted, pencil, L2, InvarianceSide::left);
      const Matrix moved = reduced_a(pencil, shifted) + h_general(pencil, shifted, lambda);
      if (fault != 0.0) base.array() += fault;
      invariance.record((moved - base).norm() / (1.0 + base.norm()));
    }

    // direct-form identities
    for (int rep = 0; rep < 10; ++rep) {
      const Index m = 6 + static_cast<Index>(rng() % 10);
      const Index rank = 3 + static_cast<Index>(rng() % (m - 3));
      ProjectionPencil pencil = random_projection_pencil(rng(), m, rank);
      const Index n = 1 + static_cast<Index>(rng() % 2);
      SubspacePair pair = random_normalized_pair(rng(), pencil, n, true);
      const Complex lambda = random_shift(rng);

      DirectIterate it = build_direct_iterate(pencil, pair, lambda, false);
      if (it.calN.size() == 0) continue;

      // V̄ = [A - λ(E - Q)]^{-1} E·E computed independently
      const Matrix EE = pencil.E() * pair.basis_right;
      const Matrix EF = pencil.E() * pair.basis_left;
      Matrix op = pencil.dense_A() - lambda * pencil.dense_E();
      op.noalias() += lambda * (EE * EF.adjoint());
      const Matrix vbar = op.partialPivLu().solve(EE);
      const Matrix n_indep = (EF.adjoint() * vbar).inverse();
      Matrix calN = it.calN;
      if (fault != 0.0) calN.array() += fault;
      fn_identity.record((calN - n_indep).norm() / (1.0 + n_indep.norm()));

      Matrix h = h_general(pencil, pair, lambda);
      if (fault != 0.0) h.array() += fault;
      const Matrix a_rr = reduced_a(pencil, pair);
      hn_identity.record((h - (it.calN - a_rr)).norm() / (1.0 + h.norm()));
    }

    // Sherman-Morrison path
    for (int rep = 0; rep < 5; ++rep) {
      const Index m = 8 + static_cast<Index>(rng() % 20);
      const Index rank = m - 2;
      ProjectionPencil pencil = random_projection_pencil(rng(), m, rank);
      const Index n = 1 + static_cast<Index>(rng() % 2);
      SubspacePair pair = random_normalized_pair(rng(), pencil, n, true);
      const Complex lambda = random_shift(rng);
      Matrix dense = h_general(pencil, pair, lambda, HForm::anticommutator);
      const Matrix sparse_path = h_general_smw(pencil, pair, lambda);
      if (fault != 0.0) dense.array() += fault;
      smw_path.record((sparse_path - dense).norm() / (1.0 + dense.norm()));
    }

    // composite two-path
    for (int rep = 0; rep < 3; ++rep) {
      SyntheticCompositeParams params;
      params.seed = rng();
      params.subsystems = 3 + static_cast<Index>(rng() % 4);
      params.states_per = 3 + static_cast<Index>(rng() % 3);
      params.io_per = 1;
      params.algebraic = 2 + static_cast<Index>(rng() % 4);
      CompositeModel model = synthetic_composite(params);
      std::vector<SubspacePair> pairs = electromech_init(model);
      ProjectionPencil mono = assemble_monolithic(model);
      SubspacePair embedded = embed_pairs(model, pairs);
      const Complex lambda = Complex(0.3, 1.0) + 0.1 * random_shift(rng);
      Matrix mono_h = reduced_a(mono, embedded) + h_general(mono, embedded, lambda);
      const Matrix comp_h = composite_h(model, pairs, lambda);
      if (fault != 0.0) mono_h.array() += fault;
      composite_path.record((comp_h - mono_h).norm() / (1.0 + mono_h.norm()));
    }
  }

  report.checks.push_back(classical_eq.finish());
  report.checks.push_back(invariance.finish());
  report.checks.push_back(fn_identity.finish());
  report.checks.push_back(hn_identity.finish());
  report.checks.push_back(smw_path.finish());
  report.checks.push_back(composite_path.finish());
  for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
  return report;
}

}  // namespace gsma
