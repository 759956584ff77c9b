#include "gsma/classical.hpp"

#include <Eigen/Dense>

#include "gsma/errors.hpp"
#include "gsma/linalg.hpp"
#include "reduced_iteration.hpp"

namespace gsma {

Matrix PartitionedSystem::assemble() const {
  const Index nn = n(), mm = m();
  Matrix A(mm, mm);
  A.topLeftCorner(nn, nn) = A_rr;
  A.topRightCorner(nn, mm - nn) = A_rz;
  A.bottomLeftCorner(mm - nn, nn) = A_zr;
  A.bottomRightCorner(mm - nn, mm - nn) = A_zz;
  return A;
}

PartitionedSystem PartitionedSystem::split(const Matrix& A, Index n_relevant) {
  if (A.rows() != A.cols()) throw InvalidArgument("split: matrix must be square");
  if (n_relevant < 1 || n_relevant > A.rows()) throw InvalidArgument("split: bad partition size");
  const Index n = n_relevant, z = A.rows() - n;
  PartitionedSystem sys;
  sys.A_rr = A.topLeftCorner(n, n);
  sys.A_rz = A.topRightCorner(n, z);
  sys.A_zr = A.bottomLeftCorner(z, n);
  sys.A_zz = A.bottomRightCorner(z, z);
  return sys;
}

namespace {

Factorization factor_shift(const Matrix& A_zz, Complex lambda) {
  const Index z = A_zz.rows();
  Matrix shifted = -A_zz;
  shifted.diagonal().array() += lambda;
  (void)z;
  try {
    return factor(shifted);
  } catch (const SingularMatrix&) {
    throw ShiftSingular("h_classical: λ collides with an eigenvalue of A_zz");
  }
}

}  // namespace

Matrix h_classical(const PartitionedSystem& sys, Complex lambda) {
  if (sys.A_zz.rows() == 0) return Matrix::Zero(sys.n(), sys.n());
  Factorization f = factor_shift(sys.A_zz, lambda);
  return sys.A_rz * f.solve(sys.A_zr);
}

std::pair<Vector, Vector> assemble_classical_eigenvectors(const PartitionedSystem& sys,
                                                          Complex lambda, const Vector& v_r,
                                                          const Vector& w_r) {
  const Index n = sys.n(), m = sys.m();
  Vector v(m), w(m);
  v.head(n) = v_r;
  w.head(n) = w_r;
  if (m > n) {
    Factorization f = factor_shift(sys.A_zz, lambda);
    v.tail(m - n) = f.solve(Vector(sys.A_zr * v_r));
    // w_z† = w_r† A_rz (λ - A_zz)^{-1}
    w.tail(m - n) = f.solve_adjoint(Vector(sys.A_rz.adjoint() * w_r));
  }
  return {v, w};
}

using detail::ProgressTracker;

SolveResult algorithm1(const PartitionedSystem& sys, const ModeSelector& selector,
                       const SolverOptions& opts) {
  SolveResult out;
  EigDecomposition eig = eig_dense(sys.A_rr);
  SelectionContext ctx;
  Index pick = select_mode(eig, selector, ctx);

  Complex lambda = eig.eigenvalues[pick];
  Vector alpha = eig.right.col(pick);
  Vector beta = eig.left.col(pick);
  out.report.iterates.push_back({lambda, std::numeric_limits<double>::quiet_NaN(), {}, {}, false});

  ProgressTracker tracker{opts.tol, opts.divergence_window};
  for (int j = 1; j <= opts.max_iter; ++j) {
    const Matrix H = h_classical(sys, lambda);
    eig = eig_dense(sys.A_rr + H);
    ctx.has_previous = true;
    ctx.lambda_prev = lambda;
    ctx.alpha_prev = alpha;
    ctx.beta_prev = beta;
    pick = select_mode(eig, selector, ctx);

    const Complex lambda_new = eig.eigenvalues[pick];
    const double delta = std::abs(lambda_new - lambda);
    lambda = lambda_new;
    alpha = eig.right.col(pick);
    beta = eig.left.col(pick);
    out.report.iterates.push_back({lambda, delta, {}, {}, false});

    if (auto status = tracker.step(lambda, delta)) {
      out.report.status = *status;
      break;
    }
  }

  out.mode.lambda = lambda;
  out.mode.alpha = alpha;
  out.mode.beta = beta;
  auto [v, w] = assemble_classical_eigenvectors(sys, lambda, alpha, beta);
  const double vn = v.norm();
  if (vn > 0) v /= vn;
  const Complex pairing = w.dot(v);
  if (std::abs(pairing) > 1e-12 * w.norm()) {
    w /= std::conj(pairing);
  } else {
    if (w.norm() > 0) w /= w.norm();
    out.mode.degenerate_pairing = true;
  }
  out.mode.v = v;
  out.mode.w = w;
  const Matrix A = sys.assemble();
  out.mode.residual = (A * v - lambda * v).norm() / ((norm_inf(A) + std::abs(lambda)) * v.norm());
  return out;
}

MultiSolveResult algorithm2(const PartitionedSystem& sys, const std::vector<ModeSelector>& selectors,
                            const SolverOptions& opts) {
  const Index n = sys.n();
  const Index K = static_cast<Index>(selectors.size());
  if (K < 1) throw InvalidArgument("algorithm2: need at least one selector");
  if (K > n) throw InvalidArgument("algorithm2: more selectors than relevant variables");

  MultiSolveResult out;
  out.modes.resize(static_cast<size_t>(K));
  out.reports.resize(static_cast<size_t>(K));

  EigDecomposition eig = eig_dense(sys.A_rr);
  std::vector<Complex> lambdas(static_cast<size_t>(K));
  Matrix V_r(n, K);
  Matrix W_r(n, K);
  {
    SelectionContext ctx;
    std::vector<bool> taken(static_cast<size_t>(n), false);
    for (Index k = 0; k < K; ++k) {
      Index pick = select_mode(eig, selectors[static_cast<size_t>(k)], ctx);
      // initial modes must be distinct; fall back to the next free candidate
      while (taken[static_cast<size_t>(pick)]) pick = (pick + 1) % n;
      taken[static_cast<size_t>(pick)] = true;
      lambdas[static_cast<size_t>(k)] = eig.eigenvalues[pick];
      V_r.col(k) = eig.right.col(pick);
      W_r.col(k) = eig.left.col(pick);
      out.reports[static_cast<size_t>(k)].iterates.push_back(
          {eig.eigenvalues[pick], std::numeric_limits<double>::quiet_NaN(), {}, {}, false});
    }
  }

  std::vector<ProgressTracker> trackers(static_cast<size_t>(K),
                                        ProgressTracker{opts.tol, opts.divergence_window});
  std::vector<std::optional<SolveStatus>> done(static_cast<size_t>(K));

  for (int j = 1; j <= opts.max_iter; ++j) {
    // 3.1: right-hand side columns H(λ_i) v_{i,r}
    Matrix rhs(n, K);
    for (Index k = 0; k < K; ++k)
      rhs.col(k) = h_classical(sys, lambdas[static_cast<size_t>(k)]) * V_r.col(k);

    // M·V_r = rhs; unique when K = n, minimum-norm completion otherwise.
    // Solved as V_r† M† = rhs†.
    Matrix M;
    {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(V_r.adjoint());
      cod.setThreshold(1e-12);
      if (cod.rank() < K)
        throw IterateSingular("algorithm2: eigenvector iterate matrix is rank-deficient");
      M = cod.solve(rhs.adjoint()).adjoint();
    }

    eig = eig_dense(sys.A_rr + M);
    const auto assignment = pair_modes(V_r, eig.right);

    bool all_done = true;
    for (Index k = 0; k < K; ++k) {
      const size_t sk = static_cast<size_t>(k);
      if (done[sk]) continue;
      const Index pick = assignment[sk];
      const Complex lambda_new = eig.eigenvalues[pick];
      const double delta = std::abs(lambda_new - lambdas[sk]);
      lambdas[sk] = lambda_new;
      V_r.col(k) = eig.right.col(pick);
      W_r.col(k) = eig.left.col(pick);
      out.reports[sk].iterates.push_back({lambda_new, delta, {}, {}, false});
      done[sk] = trackers[sk].step(lambda_new, delta);
      if (!done[sk]) all_done = false;
    }
    if (all_done) break;
  }

  const Matrix A = sys.assemble();
  const double scale_A = norm_inf(A);
  for (Index k = 0; k < K; ++k) {
    const size_t sk = static_cast<size_t>(k);
    out.reports[sk].status = done[sk].value_or(SolveStatus::max_iterations);
    ModeEstimate& mode = out.modes[sk];
    mode.lambda = lambdas[sk];
    mode.alpha = V_r.col(k);
    mode.beta = W_r.col(k);
    auto [v, w] = assemble_classical_eigenvectors(sys, mode.lambda, mode.alpha, mode.beta);
    if (v.norm() > 0) v /= v.norm();
    const Complex pairing = w.dot(v);
    if (std::abs(pairing) > 1e-12 * w.norm())
      w /= std::conj(pairing);
    else
      mode.degenerate_pairing = true;
    mode.v = v;
    mode.w = w;
    mode.residual =
        (A * v - mode.lambda * v).norm() / ((scale_A + std::abs(mode.lambda)) * v.norm());
  }
  return out;
}

}  // namespace gsma
