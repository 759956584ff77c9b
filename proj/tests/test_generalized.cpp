#include <doctest.h>

#include <random>

#include "gsma/classical.hpp"
#include "gsma/errors.hpp"
#include "gsma/generalized.hpp"
#include "gsma/problems.hpp"
#include "gsma/random_instances.hpp"
#include "support.hpp"

using namespace gsma;
using testsupport::perturbed_oracle_pair;
using testsupport::random_complex;

TEST_CASE("h_general: canonical embedding reproduces the classical formula") {
  std::mt19937_64 rng(201);
  PartitionedSystem sys = random_partitioned_system(rng(), 8, 3);
  auto [pencil, pair] = canonical_embedding(sys);
  const Complex lambda(1.3, 0.4);
  const Matrix hc = h_classical(sys, lambda);
  for (HForm form : {HForm::qa_only, HForm::aq_only, HForm::anticommutator}) {
    const Matrix hg = h_general(pencil, pair, lambda, form);
    CHECK((hg - hc).norm() <= 1e-12 * (1.0 + hc.norm()));
  }
}

TEST_CASE("h_general: invariant subspace gives H = 0") {
  // A maps span(E) into itself (block upper-triangular), E = I
  std::mt19937_64 rng(203);
  Matrix A = random_complex(rng, 6, 6);
  A.bottomLeftCorner(4, 2).setZero();
  ProjectionPencil pencil(Matrix(Matrix::Identity(6, 6)), A);
  Matrix basis = Matrix::Zero(6, 2);
  basis.topRows(2) = Matrix::Identity(2, 2);
  SubspacePair pair = normalize_pair(basis, basis, pencil);
  CHECK(h_general(pencil, pair, Complex(0.9, 0.2)).norm() <= 1e-12 * norm_inf(A));
}

TEST_CASE("h_general: the three shifted-operator forms agree") {
  std::mt19937_64 rng(207);
  for (int rep = 0; rep < 5; ++rep) {
    ProjectionPencil pencil = random_projection_pencil(rng(), 8, 5);
    SubspacePair pair = random_normalized_pair(rng(), pencil, 2, true);
    const Complex lambda(0.7, -0.5);
    const Matrix h1 = h_general(pencil, pair, lambda, HForm::anticommutator);
    const Matrix h2 = h_general(pencil, pair, lambda, HForm::qa_only);
    const Matrix h3 = h_general(pencil, pair, lambda, HForm::aq_only);
    CHECK((h1 - h2).norm() <= 1e-10 * (1.0 + h1.norm()));
    CHECK((h2 - h3).norm() <= 1e-10 * (1.0 + h1.norm()));
  }
}

TEST_CASE("recover_z_y: constraints, invariant case and classical block algebra") {
  // invariant subspace: z = 0
  {
    std::mt19937_64 rng(211);
    Matrix A = random_complex(rng, 6, 6);
    A.bottomLeftCorner(4, 2).setZero();
    A.topRightCorner(2, 4).setZero();  // fully decoupled so y = 0 too
    ProjectionPencil pencil(Matrix(Matrix::Identity(6, 6)), A);
    Matrix basis = Matrix::Zero(6, 2);
    basis.topRows(2) = Matrix::Identity(2, 2);
    SubspacePair pair = normalize_pair(basis, basis, pencil);
    Vector alpha(2), beta(2);
    alpha << 1, Complex(0, 1);
    beta << Complex(2, 0), -1;
    RecoveredVectors rec = recover_z_y(pencil, pair, Complex(0.3, 0.1), alpha, beta);
    CHECK(rec.z.norm() <= 1e-12);
    CHECK((rec.v - pair.basis_right * alpha).norm() <= 1e-12);
  }
  // decomposition constraints on a random instance
  {
    std::mt19937_64 rng(213);
    ProjectionPencil pencil = random_projection_pencil(rng(), 9, 6);
    SubspacePair pair = random_normalized_pair(rng(), pencil, 2, true);
    Vector alpha = testsupport::random_complex_vector(rng, 2);
    Vector beta = testsupport::random_complex_vector(rng, 2);
    RecoveredVectors rec = recover_z_y(pencil, pair, Complex(-0.4, 0.8), alpha, beta);
    CHECK((pair.basis_left.adjoint() * (pencil.E() * rec.z)).norm() <= 1e-10 * (1 + rec.z.norm()));
    CHECK((pair.basis_right.adjoint() * (pencil.E() * rec.y)).norm() <= 1e-10 * (1 + rec.y.norm()));
  }
  // classical embedding: v_z = (λ - A_zz)^{-1} A_zr v_r
  {
    std::mt19937_64 rng(217);
    PartitionedSystem sys = random_partitioned_system(rng(), 7, 2);
    auto [pencil, pair] = canonical_embedding(sys);
    Vector alpha = testsupport::random_complex_vector(rng, 2);
    Vector beta = testsupport::random_complex_vector(rng, 2);
    const Complex lambda(2.2, -0.3);
    RecoveredVectors rec = recover_z_y(pencil, pair, lambda, alpha, beta);
    Matrix shifted = -sys.A_zz;
    shifted.diagonal().array() += lambda;
    const Vector vz = shifted.partialPivLu().solve(Vector(sys.A_zr * alpha));
    CHECK((rec.v.tail(5) - vz).norm() <= 1e-10 * (1.0 + vz.norm()));
  }
}

TEST_CASE("algorithm3: exact subspaces converge immediately") {
  std::mt19937_64 rng(219);
  ProjectionPencil pencil = random_projection_pencil(rng(), 8, 5);
  OracleSpectrum oracle = oracle_full_spectrum(pencil);
  const OracleMode& target = oracle.modes[1];
  SubspacePair pair = normalize_pair(target.v, target.w, pencil);
  SolveResult r = algorithm3(pencil, pair, ModeSelector::nearest_to(target.lambda));
  CHECK(r.report.status == SolveStatus::converged);
  CHECK(r.report.iterates.size() <= 3);  // initial pick + at most two confirms
  CHECK(std::abs(r.mode.lambda - target.lambda) <= 1e-10 * (1.0 + std::abs(target.lambda)));
}

TEST_CASE("algorithm3: plate problem converges to the oracle mode") {
  CrossGeometry g;
  g.core = 4;
  g.arm_up = 5;
  g.arm_down = 3;
  g.arm_left = 2;
  g.arm_right = 2;
  g.h = 0.15;
  auto [pencil, layout] = cross_plate(g);
  const Vector guess = cross_plate_initial_guess(g, layout, ArmPattern::up_vs_down);
  SubspacePair pair = normalize_pair(guess, guess, pencil);
  SolverOptions opts;
  opts.max_iter = 200;
  SolveResult r = algorithm3(pencil, pair, ModeSelector::by_pattern(Vector::Ones(1)), opts);
  REQUIRE(r.report.status == SolveStatus::converged);

  OracleSpectrum oracle = oracle_full_spectrum(pencil);
  const OracleMode& nearest = testsupport::nearest_mode(oracle, r.mode.lambda);
  CHECK(std::abs(r.mode.lambda - nearest.lambda) <= 1e-8 * std::abs(nearest.lambda));
  CHECK(r.mode.residual <= 1e-8);
}

TEST_CASE("algorithm3: rho below one for the target mode leads away from it") {
  std::mt19937_64 rng(223);
  int checked = 0;
  for (int attempt = 0; attempt < 60 && checked < 3; ++attempt) {
    ProjectionPencil pencil = random_projection_pencil(rng(), 7, 5);
    OracleSpectrum oracle = oracle_full_spectrum(pencil);
    const OracleMode& target = oracle.modes[static_cast<size_t>(rng() % oracle.modes.size())];
    SubspacePair pair;
    try {
      pair = random_normalized_pair(rng(), pencil, 1, true);
    } catch (const DegenerateSubspace&) {
      continue;
    }
    const ParticipationRatio rho = participation_ratio(target.v, target.w, pair, pencil);
    if (rho.magnitude() >= 0.9) continue;
    ++checked;
    SolverOptions opts;
    opts.max_iter = 50;
    try {
      SolveResult r = algorithm3(pencil, pair, ModeSelector::nearest_to(target.lambda), opts);
      const bool converged_to_target =
          r.report.status == SolveStatus::converged &&
          std::abs(r.mode.lambda - target.lambda) <= 1e-6 * (1.0 + std::abs(target.lambda));
      CHECK(!converged_to_target);
    } catch (const Error&) {
      // shift collisions along the way also count as failure to converge
    }
  }
  CHECK(checked >= 3);
}

TEST_CASE("algorithm4: plate limit matches algorithm3 with fewer iterations and order ≥ 2") {
  CrossGeometry g;
  g.core = 4;
  g.arm_up = 5;
  g.arm_down = 3;
  g.arm_left = 2;
  g.arm_right = 2;
  g.h = 0.15;
  auto [pencil, layout] = cross_plate(g);
  const Vector guess = cross_plate_initial_guess(g, layout, ArmPattern::up_vs_down);
  SubspacePair pair = normalize_pair(guess, guess, pencil);

  SolverOptions opts;
  opts.max_iter = 200;
  opts.tol = 1e-12;
  SolveResult r3 = algorithm3(pencil, pair, ModeSelector::by_pattern(Vector::Ones(1)), opts);
  SolveResult r4 = algorithm4(pencil, pair, ModeSelector::by_pattern(Vector::Ones(1)), opts);
  REQUIRE(r3.report.status == SolveStatus::converged);
  REQUIRE(r4.report.status == SolveStatus::converged);
  CHECK(std::abs(r3.mode.lambda - r4.mode.lambda) <= 1e-8 * std::abs(r3.mode.lambda));
  CHECK(r4.report.iterates.size() < r3.report.iterates.size());
  REQUIRE(r4.report.order_fit.has_value());
  CHECK(*r4.report.order_fit >= 2.0);
}

TEST_CASE("algorithm4: exact pair converges in one iteration with H ≈ 0") {
  std::mt19937_64 rng(227);
  ProjectionPencil pencil = random_projection_pencil(rng(), 8, 6);
  OracleSpectrum oracle = oracle_full_spectrum(pencil);
  const OracleMode& target = oracle.modes[2];
  SubspacePair pair = normalize_pair(target.v, target.w, pencil);
  SolveResult r = algorithm4(pencil, pair, ModeSelector::nearest_to(target.lambda));
  CHECK(r.report.status == SolveStatus::converged);
  CHECK(r.report.iterates.size() <= 3);
  const Matrix H = h_general(pencil, pair, r.mode.lambda);
  CHECK(H.norm() <= 1e-8 * (1.0 + std::abs(r.mode.lambda)));
}

TEST_CASE("algorithm4: zeroed-static and full-eigenvector updates give the same λ sequence") {
  std::mt19937_64 rng(229);
  ProjectionPencil pencil = random_projection_pencil(rng(), 9, 6);
  OracleSpectrum oracle = oracle_full_spectrum(pencil);
  auto perturbed = perturbed_oracle_pair(pencil, oracle.modes[3], 0.2, rng(), 1.5, &oracle);

  SolverOptions opts;
  opts.tol = 1e-11;
  opts.max_iter = 60;
  opts.subspace_update = SubspaceUpdate::full_eigenvector;
  SolveResult full = algorithm4(pencil, perturbed.pair,
                                ModeSelector::nearest_to(perturbed.target.lambda), opts);
  opts.subspace_update = SubspaceUpdate::zeroed_static;
  SolveResult zeroed = algorithm4(pencil, perturbed.pair,
                                  ModeSelector::nearest_to(perturbed.target.lambda), opts);
  REQUIRE(full.report.status == SolveStatus::converged);
  REQUIRE(zeroed.report.status == SolveStatus::converged);
  const size_t len = std::min(full.report.iterates.size(), zeroed.report.iterates.size());
  for (size_t j = 0; j < len; ++j) {
    CHECK(std::abs(full.report.iterates[j].lambda - zeroed.report.iterates[j].lambda) <=
          1e-10 * (1.0 + std::abs(full.report.iterates[j].lambda)));
  }
}

TEST_CASE("invariance_shift: trivial cases and the A_rr + H identity") {
  std::mt19937_64 rng(233);
  ProjectionPencil pencil = random_projection_pencil(rng(), 8, 5);
  SubspacePair pair = random_normalized_pair(rng(), pencil, 2, true);

  // L = 0 leaves the pair untouched
  SubspacePair same = invariance_shift(pair, pencil, Matrix::Zero(8, 2), InvarianceSide::right);
  CHECK((same.basis_right - pair.basis_right).norm() == 0.0);

  // identity E: (I - E) = 0
  ProjectionPencil ident(Matrix(Matrix::Identity(6, 6)), random_complex(rng, 6, 6));
  SubspacePair pid = random_normalized_pair(rng(), ident, 2, true);
  const Matrix L6 = random_complex(rng, 6, 2);
  SubspacePair pid2 = invariance_shift(pid, ident, L6, InvarianceSide::right);
  CHECK((pid2.basis_right - pid.basis_right).norm() <= 1e-14 * pid.basis_right.norm());

  // A_rr + H(λ) invariant on a singular-E pencil
  const Complex lambda(0.6, 1.1);
  const Matrix base = reduced_a(pencil, pair) + h_general(pencil, pair, lambda);
  SubspacePair moved = invariance_shift(pair, pencil, Matrix(random_complex(rng, 8, 2)),
                                        InvarianceSide::right);
  moved = invariance_shift(moved, pencil, Matrix(random_complex(rng, 8, 2)), InvarianceSide::left);
  const Matrix after = reduced_a(pencil, moved) + h_general(pencil, moved, lambda);
  CHECK((after - base).norm() <= 1e-10 * (1.0 + base.norm()));
}

TEST_CASE("order_estimate: synthetic sequences") {
  // exactly quadratic: e_{j+1} = e_j^2
  std::vector<double> quad;
  double e = 0.4;
  for (int j = 0; j < 6; ++j) {
    quad.push_back(e);
    e = e * e;
  }
  CHECK(order_estimate(quad) == doctest::Approx(2.0).epsilon(0.05));

  // linear with ratio 0.5
  std::vector<double> lin;
  e = 1.0;
  for (int j = 0; j < 8; ++j) {
    lin.push_back(e);
    e *= 0.5;
  }
  CHECK(order_estimate(lin) == doctest::Approx(1.0).epsilon(0.05));

  CHECK_THROWS_AS(order_estimate({0.5, 0.3, 0.1}), InsufficientData);        // too short
  CHECK_THROWS_AS(order_estimate({0.5, 0.6, 0.1, 0.01}), InsufficientData);  // not decreasing
}

TEST_CASE("theorem identity: [A - λ_prev(E - Q)]v = λ Q v at every iterate") {
  std::mt19937_64 rng(239);
  for (int rep = 0; rep < 4; ++rep) {
    ProjectionPencil pencil = random_projection_pencil(rng(), 8, 6);
    SubspacePair pair = random_normalized_pair(rng(), pencil, 2, true);
    const Complex shift(0.4, -0.9);
    const Matrix R = reduced_a(pencil, pair) + h_general(pencil, pair, shift);
    EigDecomposition eig = eig_dense(R);
    for (Index k = 0; k < eig.size(); ++k) {
      const Complex lambda = eig.eigenvalues[k];
      RecoveredVectors rec =
          recover_z_y(pencil, pair, shift, Vector(eig.right.col(k)), Vector(eig.left.col(k)));
      Projectors proj = projectors(pair, pencil);
      const Vector lhs =
          pencil.dense_A() * rec.v - shift * ((pencil.dense_E() - proj.Q) * rec.v);
      const Vector rhs = lambda * (proj.Q * rec.v);
      CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()) * norm_inf(pencil.dense_A()));
    }
  }
}

TEST_CASE("beta is a left eigenvector of A_rr + H at convergence") {
  std::mt19937_64 rng(241);
  ProjectionPencil pencil = random_projection_pencil(rng(), 8, 6);
  OracleSpectrum oracle = oracle_full_spectrum(pencil);
  auto perturbed = perturbed_oracle_pair(pencil, oracle.modes[1], 0.2, rng(), 1.5, &oracle);
  SolverOptions opts;
  opts.max_iter = 100;
  SolveResult r =
      algorithm3(pencil, perturbed.pair, ModeSelector::nearest_to(perturbed.target.lambda), opts);
  REQUIRE(r.report.status == SolveStatus::converged);
  const Matrix R = reduced_a(pencil, perturbed.pair) +
                   h_general(pencil, perturbed.pair, r.mode.lambda);
  CHECK((r.mode.beta.adjoint() * R - r.mode.lambda * r.mode.beta.adjoint()).norm() <=
        1e-7 * (1.0 + norm_inf(R)));
}

TEST_CASE("shifted operator: regular with eigenvector Q, singular anticommutator at λ = 0") {
  std::mt19937_64 rng(251);
  for (int rep = 0; rep < 5; ++rep) {
    const Index m = 6 + static_cast<Index>(rng() % 10);
    ProjectionPencil pencil = random_projection_pencil(rng(), m, m - 2);
    OracleSpectrum oracle = oracle_full_spectrum(pencil);
    const OracleMode& mode = oracle.modes[static_cast<size_t>(rng() % oracle.modes.size())];
    if (std::abs(mode.lambda) < 1e-3) continue;
    SubspacePair pair = normalize_pair(mode.v, mode.w, pencil);
    ShiftedOperator op = build_shifted_operator(pencil, pair, mode.lambda, HForm::qa_only);
    CHECK(op.fact.condition_estimate() < 1e10);
  }

  // λ = 0 with eigenvector-based Q breaks the shifted operator: Av = 0 makes
  // v a null vector of λE - A + QA, and Ev one of λE - A + AQ.  The detection
  // path must flag all forms.
  Matrix Az = Matrix::Zero(3, 3);
  Az(0, 0) = 0.0;
  Az(1, 1) = -1.0;
  Az(2, 2) = -2.0;
  Az(0, 1) = 0.5;
  ProjectionPencil pencil0(Matrix(Matrix::Identity(3, 3)), Az);
  OracleSpectrum oracle0 = oracle_full_spectrum(pencil0);
  const OracleMode& zero_mode = testsupport::nearest_mode(oracle0, Complex(0, 0));
  REQUIRE(std::abs(zero_mode.lambda) <= 1e-12);
  SubspacePair pair0 = normalize_pair(zero_mode.v, zero_mode.w, pencil0);
  CHECK_THROWS_AS(build_shifted_operator(pencil0, pair0, Complex(0, 0), HForm::anticommutator),
                  ShiftSingular);
  CHECK_THROWS_AS(build_shifted_operator(pencil0, pair0, Complex(0, 0), HForm::qa_only),
                  ShiftSingular);
  CHECK_THROWS_AS(build_shifted_operator(pencil0, pair0, Complex(0, 0), HForm::aq_only),
                  ShiftSingular);
}
