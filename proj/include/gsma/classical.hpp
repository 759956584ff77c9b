#pragma once

#include <vector>

#include "gsma/selectors.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// Explicitly partitioned standard eigenproblem ẋ = Ax with relevant (r)
/// and less-relevant (z) states.
struct PartitionedSystem {
  Matrix A_rr, A_rz, A_zr, A_zz;

  Index n() const { return A_rr.rows(); }
  Index m() const { return A_rr.rows() + A_zz.rows(); }
  Matrix assemble() const;

  static PartitionedSystem split(const Matrix& A, Index n_relevant);
};

/// H(λ) = A_rz (λI - A_zz)^{-1} A_zr.
Matrix h_classical(const PartitionedSystem& sys, Complex lambda);

/// Single-mode fixed-point iteration on spec(A_rr + H(λ)).
SolveResult algorithm1(const PartitionedSystem& sys, const ModeSelector& selector,
                       const SolverOptions& opts = {});

/// Simultaneous iteration for several modes; M_j fits M_j·V_r = [H(λ_i)v_{i,r}].
MultiSolveResult algorithm2(const PartitionedSystem& sys, const std::vector<ModeSelector>& selectors,
                            const SolverOptions& opts = {});

/// Assembles the full-space eigenvector pair for a converged classical mode:
/// v_z = (λ - A_zz)^{-1} A_zr v_r and the dual for w.
std::pair<Vector, Vector> assemble_classical_eigenvectors(const PartitionedSystem& sys,
                                                          Complex lambda, const Vector& v_r,
                                                          const Vector& w_r);

}  // namespace gsma
