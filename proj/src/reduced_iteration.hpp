#pragma once

// Internal driver for the fixed-point iterations on spec(A_rr + H(λ)).
// Not installed; shared by the generalized, direct and composite solvers.

#include <optional>

#include "gsma/linalg.hpp"
#include "gsma/pencil.hpp"
#include "gsma/selectors.hpp"
#include "gsma/types.hpp"

namespace gsma::detail {

struct ProgressTracker {
  double tol;
  int divergence_window;
  int growth_streak = 0;
  double prev_delta = std::numeric_limits<double>::infinity();

  std::optional<SolveStatus> step(Complex lambda, double delta) {
    if (delta <= tol * (1.0 + std::abs(lambda))) return SolveStatus::converged;
    if (delta > prev_delta) {
      if (++growth_streak >= divergence_window) return SolveStatus::diverged;
    } else {
      growth_streak = 0;
    }
    prev_delta = delta;
    return std::nullopt;
  }
};

/// One reduced problem driven by the algorithm-3/4 loop.  Implementations
/// exist for plain pencils (dense and Sherman–Morrison H paths) and for
/// composite models.
class ReducedProblem {
 public:
  virtual ~ReducedProblem() = default;

  struct Recovered {
    Vector v, w;
    double residual = std::numeric_limits<double>::quiet_NaN();
    ParticipationRatio rho;
  };

  virtual const Matrix& a_rr() = 0;
  virtual Matrix reduced_matrix(Complex shift) = 0;  // A_rr + H(shift)
  virtual Recovered recover(Complex shift, Complex lambda, const Vector& alpha,
                            const Vector& beta) = 0;
  /// Subspace refresh between iterations (algorithm 4 flavor); re-expresses
  /// alpha/beta in the refreshed basis.  Default: fixed subspaces.
  virtual void update_subspace(const Recovered&, Vector& /*alpha*/, Vector& /*beta*/) {}
  virtual const Matrix* initial_basis() const { return nullptr; }
  virtual const Matrix* current_basis() const { return nullptr; }
};

SolveResult iterate_reduced(ReducedProblem& problem, const ModeSelector& selector,
                            const SolverOptions& opts, bool refresh_subspace);

}  // namespace gsma::detail
