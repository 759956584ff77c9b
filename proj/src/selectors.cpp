#include "gsma/selectors.hpp"

#include <algorithm>
#include <cmath>

#include "gsma/errors.hpp"

namespace gsma {

ModeSelector ModeSelector::nearest_to(Complex target, Tracking tracking) {
  ModeSelector s;
  s.kind = Kind::nearest;
  s.tracking = tracking;
  s.target = target;
  return s;
}

ModeSelector ModeSelector::by_index(Index index, Tracking tracking) {
  ModeSelector s;
  s.kind = Kind::index;
  s.tracking = tracking;
  s.index = index;
  return s;
}

ModeSelector ModeSelector::by_pattern(Vector pattern, Tracking tracking) {
  ModeSelector s;
  s.kind = Kind::pattern;
  s.tracking = tracking;
  s.pattern = std::move(pattern);
  return s;
}

ModeSelector ModeSelector::by_objective(Vector objective) {
  ModeSelector s;
  s.kind = Kind::objective;
  s.pattern = std::move(objective);
  return s;
}

namespace {

Index argmin_distance(const Vector& eigenvalues, Complex ref) {
  Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < eigenvalues.size(); ++k) {
    const double d = std::abs(eigenvalues[k] - ref);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

Index argmax_overlap(const EigDecomposition& cand, const Vector& beta_prev, Complex lambda_prev) {
  Index best = 0;
  double best_o = -1.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < cand.size(); ++k) {
    const Vector a = cand.right.col(k);
    const double o = std::abs(beta_prev.dot(a)) / std::max(a.norm(), 1e-300);
    const double dist = std::abs(cand.eigenvalues[k] - lambda_prev);
    const bool tie = std::abs(o - best_o) <= 1e-12 * std::max(1.0, best_o);
    if ((tie && dist < best_dist) || (!tie && o > best_o)) {
      best_o = std::max(o, best_o);
      best_dist = dist;
      best = k;
    }
  }
  return best;
}

}  // namespace

Index select_mode_objective(const Vector& objective, const Matrix& basis0, const Matrix& basis_prev,
                            const Matrix& candidate_alphas) {
  if (basis0.rows() != basis_prev.rows() || objective.size() != basis0.cols() ||
      basis_prev.cols() != candidate_alphas.rows())
    throw DimensionMismatch("select_mode_objective: inconsistent dimensions");
  // p_k = α_o† E_0† E_{j-1} α_k
  const Vector lhs = (objective.adjoint() * basis0.adjoint() * basis_prev).adjoint();
  Index best = 0;
  double best_p = -1.0;
  for (Index k = 0; k < candidate_alphas.cols(); ++k) {
    const double p = std::abs(lhs.dot(candidate_alphas.col(k)));
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }
  return best;
}

Index select_mode(const EigDecomposition& candidates, const ModeSelector& selector,
                  const SelectionContext& ctx) {
  if (candidates.size() == 0) throw InvalidArgument("select_mode: no candidates");

  if (selector.kind == ModeSelector::Kind::objective) {
    if (!ctx.basis_initial || !ctx.basis_current)
      throw InvalidArgument("select_mode: objective selection needs basis context");
    return select_mode_objective(selector.pattern, *ctx.basis_initial, *ctx.basis_current,
                                 candidates.right);
  }

  if (!ctx.has_previous) {
    switch (selector.kind) {
      case ModeSelector::Kind::nearest:
        return argmin_distance(candidates.eigenvalues, selector.target);
      case ModeSelector::Kind::index:
        if (selector.index < 0 || selector.index >= candidates.size())
          throw InvalidArgument("select_mode: index out of range");
        return selector.index;
      case ModeSelector::Kind::pattern: {
        if (selector.pattern.size() != candidates.right.rows())
          throw DimensionMismatch("select_mode: pattern size mismatch");
        Index best = 0;
        double best_o = -1.0;
        for (Index k = 0; k < candidates.size(); ++k) {
          const Vector a = candidates.right.col(k);
          const double o = std::abs(selector.pattern.dot(a)) / std::max(a.norm(), 1e-300);
          if (o > best_o) {
            best_o = o;
            best = k;
          }
        }
        return best;
      }
      default:
        break;
    }
  }

  if (selector.tracking == ModeSelector::Tracking::overlap && ctx.beta_prev.size() > 0 &&
      ctx.beta_prev.size() == candidates.right.rows())
    return argmax_overlap(candidates, ctx.beta_prev, ctx.lambda_prev);
  return argmin_distance(candidates.eigenvalues, ctx.has_previous ? ctx.lambda_prev : selector.target);
}

std::vector<Index> pair_modes(const Matrix& prev_alphas, const Matrix& new_alphas) {
  const Index k_modes = prev_alphas.cols();
  const Index n_cand = new_alphas.cols();
  if (k_modes == 0 || n_cand == 0) throw InvalidArgument("pair_modes: empty input");
  if (n_cand < k_modes) throw InvalidArgument("pair_modes: fewer candidates than modes");
  if (prev_alphas.rows() != new_alphas.rows())
    throw DimensionMismatch("pair_modes: coordinate dimension mismatch");

  std::vector<bool> used(static_cast<size_t>(n_cand), false);
  std::vector<Index> assignment(static_cast<size_t>(k_modes), 0);
  for (Index i = 0; i < k_modes; ++i) {
    const Vector p = prev_alphas.col(i).normalized();
    Index best = -1;
    double best_o = -1.0;
    for (Index k = 0; k < n_cand; ++k) {
      if (used[static_cast<size_t>(k)]) continue;
      const Vector a = new_alphas.col(k);
      const double o = std::abs(p.dot(a)) / std::max(a.norm(), 1e-300);
      if (o > best_o) {
        best_o = o;
        best = k;
      }
    }
    used[static_cast<size_t>(best)] = true;
    assignment[static_cast<size_t>(i)] = best;
  }
  return assignment;
}

}  // namespace gsma
