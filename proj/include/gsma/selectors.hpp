#pragma once

#include <vector>

#include "gsma/linalg.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// Per-iteration context handed to the mode selector.  At the initial
/// selection has_previous is false and the tracking criterion falls back to
/// the selector's own initial one.
struct SelectionContext {
  bool has_previous = false;
  Complex lambda_prev{};
  Vector alpha_prev;
  Vector beta_prev;
  const Matrix* basis_initial = nullptr;  // E_0, for the objective rule
  const Matrix* basis_current = nullptr;  // E_{j-1}
};

/// Picks "the interesting mode" out of a reduced-matrix eigenanalysis.
///   nearest    — closest eigenvalue to the target (then to the previous λ)
///   index      — fixed index at start, overlap tracking afterwards
///   pattern    — maximize |pattern†α| at start, overlap tracking afterwards
///   objective  — maximize ‖α_o† E_0† E_{j-1} α_k‖ at every iteration
/// Tracking between iterations is either nearest-λ or |β_prev†α| overlap
/// (ties within 1e-12 resolved by nearest λ, then lowest index).
struct ModeSelector {
  enum class Kind { nearest, index, pattern, objective };
  enum class Tracking { nearest, overlap };

  Kind kind = Kind::nearest;
  Tracking tracking = Tracking::overlap;
  Complex target{};
  Index index = 0;
  Vector pattern;  // α-space pattern or the objective α_o

  static ModeSelector nearest_to(Complex target, Tracking tracking = Tracking::nearest);
  static ModeSelector by_index(Index index, Tracking tracking = Tracking::overlap);
  static ModeSelector by_pattern(Vector pattern, Tracking tracking = Tracking::overlap);
  static ModeSelector by_objective(Vector objective);
};

Index select_mode(const EigDecomposition& candidates, const ModeSelector& selector,
                  const SelectionContext& ctx);

/// argmax_k ‖α_o† E_0† E_prev α_k‖ with deterministic lowest-index tie-break.
Index select_mode_objective(const Vector& objective, const Matrix& basis0, const Matrix& basis_prev,
                            const Matrix& candidate_alphas);

/// Greedy pairing of previous modes to new candidates by reduced-coordinate
/// overlap; modes claim candidates in order, each candidate used once.
/// Returns, for each previous mode, the index of its candidate.
std::vector<Index> pair_modes(const Matrix& prev_alphas, const Matrix& new_alphas);

}  // namespace gsma
