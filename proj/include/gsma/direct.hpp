#pragma once

#include <vector>

#include "gsma/pencil.hpp"
#include "gsma/selectors.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// Shift-invert quantities at λ_prev: V = (A - λE)^{-1}EE, W† = F†E(A - λE)^{-1},
/// 𝓜 = F†E·V and 𝓝 = 𝓜^{-1} + λ_prev·I (𝓝 empty when 𝓜 is singular).
struct DirectIterate {
  Complex lambda_prev{};
  Matrix V;
  Matrix W;  // empty unless requested
  Matrix calM;
  Matrix calN;
  double shift_condition = 0.0;  // condition estimate of A - λ_prev E
};

/// Throws ShiftSingular only when the factorization of A - λ_prev E breaks
/// down outright; near-singular shifts are reported via shift_condition and
/// treated by callers as convergence.
DirectIterate build_direct_iterate(const ProjectionPencil& pencil, const SubspacePair& pair,
                                   Complex lambda_prev, bool need_w = true);

/// Direct counterpart of algorithm 3: eigenanalysis of 𝓜, selected eigenvalue
/// μ = (λ_j - λ_{j-1})^{-1}.
SolveResult algorithm5(const ProjectionPencil& pencil, const SubspacePair& pair,
                       const ModeSelector& selector, const SolverOptions& opts = {});

/// Superlinear variant: E ← V, F ← W (orthonormalized) each iteration.
SolveResult algorithm6(const ProjectionPencil& pencil, const SubspacePair& pair0,
                       const ModeSelector& selector, const SolverOptions& opts = {});

/// Several eigenvalues, fixed subspaces; per-mode h_k = (𝓝_k - A_rr)α_k and a
/// matrix fit M·[α_k] = [h_k].
MultiSolveResult algorithm7(const ProjectionPencil& pencil, const SubspacePair& pair,
                            const std::vector<ModeSelector>& selectors,
                            const SolverOptions& opts = {});

/// Several eigenvalues with per-iteration subspace refresh from the recovered
/// eigenvector estimates; modes are paired across iterations by pair_modes.
MultiSolveResult algorithm8(const ProjectionPencil& pencil, const SubspacePair& pair0,
                            const std::vector<ModeSelector>& selectors,
                            const SolverOptions& opts = {});

}  // namespace gsma
