#include "reduced_iteration.hpp"

#include "gsma/errors.hpp"
#include "gsma/generalized.hpp"

namespace gsma::detail {

SolveResult iterate_reduced(ReducedProblem& problem, const ModeSelector& selector,
                            const SolverOptions& opts, bool refresh_subspace) {
  SolveResult out;

  EigDecomposition eig = eig_dense(problem.a_rr());
  SelectionContext ctx;
  ctx.basis_initial = problem.initial_basis();
  ctx.basis_current = problem.current_basis();
  Index pick = select_mode(eig, selector, ctx);

  Complex lambda = eig.eigenvalues[pick];
  Vector alpha = eig.right.col(pick);
  Vector beta = eig.left.col(pick);
  out.report.iterates.push_back({lambda, std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::quiet_NaN(), {}, false});

  ReducedProblem::Recovered last;
  ProgressTracker tracker{opts.tol, opts.divergence_window};

  for (int j = 1; j <= opts.max_iter; ++j) {
    const Complex shift = lambda;
    eig = eig_dense(problem.reduced_matrix(shift));

    ctx.has_previous = true;
    ctx.lambda_prev = lambda;
    ctx.alpha_prev = alpha;
    ctx.beta_prev = beta;
    ctx.basis_current = problem.current_basis();
    pick = select_mode(eig, selector, ctx);

    const Complex lambda_new = eig.eigenvalues[pick];
    const double delta = std::abs(lambda_new - lambda);
    lambda = lambda_new;
    alpha = eig.right.col(pick);
    beta = eig.left.col(pick);

    last = problem.recover(shift, lambda, alpha, beta);
    out.report.iterates.push_back({lambda, delta, last.residual, last.rho.value, last.rho.infinite});

    if (auto status = tracker.step(lambda, delta)) {
      out.report.status = *status;
      break;
    }
    if (refresh_subspace) problem.update_subspace(last, alpha, beta);
  }

  out.mode.lambda = lambda;
  out.mode.alpha = alpha;
  out.mode.beta = beta;
  out.mode.v = last.v;
  out.mode.w = last.w;
  out.mode.residual = last.residual;

  try {
    out.report.order_fit = convergence_order_estimate(out.report);
  } catch (const InsufficientData&) {
    out.report.order_fit.reset();
  }
  return out;
}

}  // namespace gsma::detail
