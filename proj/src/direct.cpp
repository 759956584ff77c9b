#include "gsma/direct.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "gsma/errors.hpp"
#include "gsma/generalized.hpp"
#include "reduced_iteration.hpp"

namespace gsma {

DirectIterate build_direct_iterate(const ProjectionPencil& pencil, const SubspacePair& pair,
                                   Complex lambda_prev, bool need_w) {
  DirectIterate it;
  it.lambda_prev = lambda_prev;

  SparseMatrix shifted = pencil.A() - lambda_prev * pencil.E();
  Factorization f;
  try {
    f = factor(shifted);
  } catch (const SingularMatrix&) {
    throw ShiftSingular("build_direct_iterate: A - λE is singular at the current shift");
  }
  it.shift_condition = f.condition_estimate();

  const Matrix EE = pencil.E() * pair.basis_right;
  it.V = f.solve(EE);
  if (need_w) it.W = f.solve_adjoint(Matrix(pencil.E() * pair.basis_left));

  it.calM = (pencil.E() * pair.basis_left).adjoint() * it.V;
  Eigen::PartialPivLU<Matrix> lu(it.calM);
  const Index n = it.calM.rows();
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) min_pivot = std::min(min_pivot, std::abs(lu.matrixLU()(i, i)));
  if (min_pivot > 1e-300 * std::max(1.0, norm_inf(it.calM))) {
    it.calN = lu.inverse();
    it.calN.diagonal().array() += lambda_prev;
  }
  return it;
}

namespace {

// Candidate eigensystem seen by the selector: same α/β as 𝓜, eigenvalues
// mapped to λ_prev + 1/μ.
EigDecomposition direct_candidates(const EigDecomposition& eig_m, Complex lambda_prev) {
  EigDecomposition cand = eig_m;
  for (Index k = 0; k < cand.size(); ++k) {
    const Complex mu = eig_m.eigenvalues[k];
    cand.eigenvalues[k] =
        std::abs(mu) == 0.0 ? Complex(1e300, 0) : lambda_prev + Complex(1, 0) / mu;
  }
  return cand;
}

Matrix thin_orthonormal(const Matrix& X) {
  Eigen::HouseholderQR<Matrix> qr(X);
  return qr.householderQ() * Matrix::Identity(X.rows(), X.cols());
}

void finalize_mode(const ProjectionPencil& pencil, ModeEstimate& mode) {
  if (mode.v.size() == 0) return;
  const double vn = mode.v.norm();
  if (vn > 0) mode.v /= vn;
  if (mode.w.size() == 0) return;
  const Complex pairing = mode.w.dot(pencil.E() * mode.v);
  if (std::abs(pairing) > 1e-12 * mode.w.norm())
    mode.w /= std::conj(pairing);
  else {
    if (mode.w.norm() > 0) mode.w /= mode.w.norm();
    mode.degenerate_pairing = true;
  }
}

struct SingleDirectState {
  Complex lambda;
  Vector alpha, beta;
  Vector v, w;
};

// Core of algorithms 5 and 6; refresh toggles the subspace update.
SolveResult direct_single(const ProjectionPencil& pencil, SubspacePair pair,
                          const ModeSelector& selector, const SolverOptions& opts, bool refresh) {
  SolveResult out;
  const Matrix initial_right = pair.basis_right;

  Matrix a_rr = reduced_a(pencil, pair);
  EigDecomposition eig = eig_dense(a_rr);
  SelectionContext ctx;
  ctx.basis_initial = &initial_right;
  ctx.basis_current = &pair.basis_right;
  Index pick = select_mode(eig, selector, ctx);

  SingleDirectState st;
  st.lambda = eig.eigenvalues[pick];
  st.alpha = eig.right.col(pick);
  st.beta = eig.left.col(pick);
  st.v = pair.basis_right * st.alpha;
  st.w = pair.basis_left * st.beta;
  out.report.iterates.push_back({st.lambda, std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::quiet_NaN(), {}, false});

  detail::ProgressTracker tracker{opts.tol, opts.divergence_window};
  double last_residual = std::numeric_limits<double>::quiet_NaN();

  for (int j = 1; j <= opts.max_iter; ++j) {
    DirectIterate it;
    try {
      it = build_direct_iterate(pencil, pair, st.lambda, /*need_w=*/true);
    } catch (const ShiftSingular&) {
      // the shift already sits on an eigenvalue; accept if the residual agrees
      last_residual = residual(pencil, st.lambda, st.v, st.w).first;
      if (std::isfinite(last_residual) && last_residual <= 10 * opts.tol) {
        out.report.status = SolveStatus::converged;
        break;
      }
      throw;
    }

    EigDecomposition eig_m = eig_dense(it.calM);
    EigDecomposition cand = direct_candidates(eig_m, st.lambda);

    ctx.has_previous = true;
    ctx.lambda_prev = st.lambda;
    ctx.alpha_prev = st.alpha;
    ctx.beta_prev = st.beta;
    ctx.basis_current = &pair.basis_right;
    pick = select_mode(cand, selector, ctx);

    const Complex lambda_new = cand.eigenvalues[pick];
    const double delta = std::abs(lambda_new - st.lambda);
    const Complex step = lambda_new - st.lambda;
    st.alpha = eig_m.right.col(pick);
    st.beta = eig_m.left.col(pick);
    st.v = it.V * st.alpha * step;
    st.w = it.W * st.beta * std::conj(step);
    st.lambda = lambda_new;

    last_residual = residual(pencil, st.lambda, st.v, st.w).first;
    const ParticipationRatio rho = participation_ratio(st.v, st.w, pair, pencil);
    out.report.iterates.push_back({st.lambda, delta, last_residual, rho.value, rho.infinite});

    if (auto status = tracker.step(st.lambda, delta)) {
      out.report.status = *status;
      break;
    }

    if (refresh) {
      pair = normalize_pair(thin_orthonormal(it.V), thin_orthonormal(it.W), pencil);
      a_rr = reduced_a(pencil, pair);
      st.alpha = pair.basis_left.adjoint() * (pencil.E() * st.v);
      st.beta = pair.basis_right.adjoint() * (pencil.E() * st.w);
    }
  }

  out.mode.lambda = st.lambda;
  out.mode.alpha = st.alpha;
  out.mode.beta = st.beta;
  out.mode.v = st.v;
  out.mode.w = st.w;
  finalize_mode(pencil, out.mode);
  out.mode.residual = last_residual;

  try {
    out.report.order_fit = convergence_order_estimate(out.report);
  } catch (const InsufficientData&) {
    out.report.order_fit.reset();
  }
  return out;
}

// Core of algorithms 7 and 8.
MultiSolveResult direct_multi(const ProjectionPencil& pencil, SubspacePair pair,
                              const std::vector<ModeSelector>& selectors,
                              const SolverOptions& opts, bool refresh) {
  const Index K = static_cast<Index>(selectors.size());
  if (K < 1) throw InvalidArgument("direct algorithms: need at least one selector");
  if (K > pair.n()) throw InvalidArgument("direct algorithms: more targets than basis columns");

  MultiSolveResult out;
  out.modes.resize(static_cast<size_t>(K));
  out.reports.resize(static_cast<size_t>(K));

  const Matrix initial_right = pair.basis_right;
  Matrix a_rr = reduced_a(pencil, pair);
  EigDecomposition eig = eig_dense(a_rr);

  std::vector<Complex> lambdas(static_cast<size_t>(K));
  Matrix alphas(pair.n(), K);
  Matrix betas(pair.n(), K);
  std::vector<Vector> vs(static_cast<size_t>(K)), ws(static_cast<size_t>(K));
  {
    SelectionContext ctx;
    ctx.basis_initial = &initial_right;
    ctx.basis_current = &pair.basis_right;
    std::vector<bool> taken(static_cast<size_t>(eig.size()), false);
    for (Index k = 0; k < K; ++k) {
      Index pick = select_mode(eig, selectors[static_cast<size_t>(k)], ctx);
      while (taken[static_cast<size_t>(pick)]) pick = (pick + 1) % eig.size();
      taken[static_cast<size_t>(pick)] = true;
      lambdas[static_cast<size_t>(k)] = eig.eigenvalues[pick];
      alphas.col(k) = eig.right.col(pick);
      betas.col(k) = eig.left.col(pick);
      vs[static_cast<size_t>(k)] = pair.basis_right * alphas.col(k);
      ws[static_cast<size_t>(k)] = pair.basis_left * betas.col(k);
      out.reports[static_cast<size_t>(k)].iterates.push_back(
          {eig.eigenvalues[pick], std::numeric_limits<double>::quiet_NaN(),
           std::numeric_limits<double>::quiet_NaN(), {}, false});
    }
  }

  std::vector<detail::ProgressTracker> trackers(
      static_cast<size_t>(K), detail::ProgressTracker{opts.tol, opts.divergence_window});
  std::vector<std::optional<SolveStatus>> done(static_cast<size_t>(K));
  std::vector<bool> frozen(static_cast<size_t>(K), false);  // hard-singular shifts

  // Converged modes keep their λ locked but stay in the M-fit and the
  // pairing pool, so the remaining modes cannot steal their candidates.
  for (int j = 1; j <= opts.max_iter; ++j) {
    const Index n = pair.n();
    std::vector<Index> in_fit;
    for (Index k = 0; k < K; ++k) {
      const size_t sk = static_cast<size_t>(k);
      if (frozen[sk] || done[sk] == SolveStatus::diverged) continue;
      in_fit.push_back(k);
    }
    bool any_open = false;
    for (Index k : in_fit) any_open = any_open || !done[static_cast<size_t>(k)];
    if (!any_open) break;

    std::vector<DirectIterate> its(in_fit.size());
    Matrix h(n, static_cast<Index>(in_fit.size()));
    Matrix fit_alphas(n, static_cast<Index>(in_fit.size()));
    {
      std::vector<Index> kept;
      std::vector<DirectIterate> kept_its;
      for (size_t a = 0; a < in_fit.size(); ++a) {
        const Index k = in_fit[a];
        const size_t sk = static_cast<size_t>(k);
        try {
          kept_its.push_back(build_direct_iterate(pencil, pair, lambdas[sk], /*need_w=*/refresh));
          kept.push_back(k);
        } catch (const ShiftSingular&) {
          const double res = residual(pencil, lambdas[sk], vs[sk], ws[sk]).first;
          if (std::isfinite(res) && res <= 10 * opts.tol) {
            frozen[sk] = true;
            done[sk] = SolveStatus::converged;
            continue;
          }
          throw;
        }
      }
      in_fit = std::move(kept);
      its = std::move(kept_its);
      if (in_fit.empty()) break;
      h.resize(n, static_cast<Index>(in_fit.size()));
      fit_alphas.resize(n, static_cast<Index>(in_fit.size()));
      for (size_t a = 0; a < in_fit.size(); ++a) {
        if (its[a].calN.size() == 0)
          throw IterateSingular("direct algorithms: 𝓜 is singular at the current shift");
        h.col(static_cast<Index>(a)) = (its[a].calN - a_rr) * alphas.col(in_fit[a]);
        fit_alphas.col(static_cast<Index>(a)) = alphas.col(in_fit[a]);
      }
    }

    // M·[α_k] = [h_k]; unique when the fit is square, minimum-norm otherwise
    Matrix M;
    {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(fit_alphas.adjoint());
      cod.setThreshold(1e-12);
      if (cod.rank() < static_cast<Index>(in_fit.size()))
        throw IterateSingular("direct algorithms: α iterate matrix is rank-deficient");
      M = cod.solve(h.adjoint()).adjoint();
    }

    eig = eig_dense(a_rr + M);
    Matrix prev(n, static_cast<Index>(in_fit.size()));
    for (size_t a = 0; a < in_fit.size(); ++a)
      prev.col(static_cast<Index>(a)) = alphas.col(in_fit[a]);
    const auto assignment = pair_modes(prev, eig.right);

    bool all_done = true;
    for (size_t a = 0; a < in_fit.size(); ++a) {
      const Index k = in_fit[a];
      const size_t sk = static_cast<size_t>(k);
      if (done[sk] == SolveStatus::converged) continue;  // locked
      const Index pick = assignment[a];
      const Complex lambda_new = eig.eigenvalues[pick];
      const double delta = std::abs(lambda_new - lambdas[sk]);
      lambdas[sk] = lambda_new;
      alphas.col(k) = eig.right.col(pick);
      betas.col(k) = eig.left.col(pick);
      // v_k = V_k α̃_k (recovered through mode k's own shifted solve)
      vs[sk] = its[a].V * alphas.col(k);
      if (refresh) ws[sk] = its[a].W * betas.col(k);
      else ws[sk] = pair.basis_left * betas.col(k);

      const double res = residual(pencil, lambdas[sk], vs[sk], ws[sk]).first;
      const ParticipationRatio rho = participation_ratio(vs[sk], ws[sk], pair, pencil);
      out.reports[sk].iterates.push_back({lambda_new, delta, res, rho.value, rho.infinite});
      done[sk] = trackers[sk].step(lambda_new, delta);
      if (!done[sk]) all_done = false;
    }
    if (all_done) break;

    if (refresh) {
      Matrix stacked_v(pencil.dimension(), K);
      Matrix stacked_w(pencil.dimension(), K);
      for (Index k = 0; k < K; ++k) {
        stacked_v.col(k) = vs[static_cast<size_t>(k)].normalized();
        stacked_w.col(k) = ws[static_cast<size_t>(k)].normalized();
      }
      pair = normalize_pair(thin_orthonormal(stacked_v), thin_orthonormal(stacked_w), pencil);
      a_rr = reduced_a(pencil, pair);
      alphas.resize(K, K);
      betas.resize(K, K);
      // α_k, β_k by least squares against the refreshed bases
      Eigen::CompleteOrthogonalDecomposition<Matrix> codF(pair.basis_left);
      for (Index k = 0; k < K; ++k) {
        alphas.col(k) = pair.basis_right.adjoint() * vs[static_cast<size_t>(k)];
        betas.col(k) = codF.solve(ws[static_cast<size_t>(k)]);
      }
    }
  }

  for (Index k = 0; k < K; ++k) {
    const size_t sk = static_cast<size_t>(k);
    out.reports[sk].status = done[sk].value_or(SolveStatus::max_iterations);
    ModeEstimate& mode = out.modes[sk];
    mode.lambda = lambdas[sk];
    mode.alpha = alphas.col(k);
    mode.beta = betas.col(k);
    mode.v = vs[sk];
    mode.w = ws[sk];
    finalize_mode(pencil, mode);
    mode.residual = residual(pencil, mode.lambda, mode.v, mode.w).first;
    try {
      out.reports[sk].order_fit = convergence_order_estimate(out.reports[sk]);
    } catch (const InsufficientData&) {
      out.reports[sk].order_fit.reset();
    }
  }
  return out;
}

}  // namespace

SolveResult algorithm5(const ProjectionPencil& pencil, const SubspacePair& pair,
                       const ModeSelector& selector, const SolverOptions& opts) {
  return direct_single(pencil, pair, selector, opts, /*refresh=*/false);
}

SolveResult algorithm6(const ProjectionPencil& pencil, const SubspacePair& pair0,
                       const ModeSelector& selector, const SolverOptions& opts) {
  return direct_single(pencil, pair0, selector, opts, /*refresh=*/true);
}

MultiSolveResult algorithm7(const ProjectionPencil& pencil, const SubspacePair& pair,
                            const std::vector<ModeSelector>& selectors,
                            const SolverOptions& opts) {
  return direct_multi(pencil, pair, selectors, opts, /*refresh=*/false);
}

MultiSolveResult algorithm8(const ProjectionPencil& pencil, const SubspacePair& pair0,
                            const std::vector<ModeSelector>& selectors,
                            const SolverOptions& opts) {
  return direct_multi(pencil, pair0, selectors, opts, /*refresh=*/true);
}

}  // namespace gsma
