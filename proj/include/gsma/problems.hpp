#pragma once

#include <cstdint>
#include <vector>

#include "gsma/composite.hpp"
#include "gsma/pencil.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// Cross-shaped membrane: a core square with four arms of independent
/// lengths, all in grid cells of spacing h.  Arm length 0 degenerates the
/// cross to a plain square.
struct CrossGeometry {
  Index core = 6;
  Index arm_up = 10;
  Index arm_down = 6;
  Index arm_left = 8;
  Index arm_right = 5;
  double h = 0.1;
};

/// Reference geometry used by the plate experiments (two lowest arm-vs-arm
/// modes simple and well separated).
CrossGeometry reference_cross();

/// Interior-point layout: integer grid coordinates (i, j) per unknown.
struct GridLayout {
  std::vector<std::pair<Index, Index>> points;
  Index index_of(Index i, Index j) const;  // -1 when (i, j) is not interior
};

/// E = I, A = 5-point discretization of -Δ with Dirichlet boundary, so
/// λ = ω² > 0.  A is symmetric.
std::pair<ProjectionPencil, GridLayout> cross_plate(const CrossGeometry& geometry);

enum class ArmPattern { up_vs_down, right_vs_left };

/// Smooth ±1 sine bump on opposite arms, zero elsewhere; both the initial
/// right and left basis for the symmetric plate problem.
Vector cross_plate_initial_guess(const CrossGeometry& geometry, const GridLayout& layout,
                                 ArmPattern pattern);

struct SyntheticCompositeParams {
  std::uint64_t seed = 7;
  Index subsystems = 10;
  Index states_per = 4;
  Index io_per = 1;
  Index algebraic = 10;
};

/// Reproducible pseudo-random interconnected model.  Each subsystem carries a
/// (δ_k, ω_k) head with δ̇_k = 120π·ω_k and pendulum-like network coupling,
/// so oscillatory modes land in roughly the 0.2–3 Hz band.
CompositeModel synthetic_composite(const SyntheticCompositeParams& params);

/// Per-subsystem pairs E_Mk = [120π, 2πi, 0, …]ᵀ, F_Mk = [-2πi, 120π, 0, …]ᵀ
/// (normalized; the right basis is kept verbatim).
std::vector<SubspacePair> electromech_init(const CompositeModel& model);

}  // namespace gsma
