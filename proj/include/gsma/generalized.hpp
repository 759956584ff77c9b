#pragma once

#include <vector>

#include "gsma/pencil.hpp"
#include "gsma/selectors.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// A_rr = F†AE.
Matrix reduced_a(const ProjectionPencil& pencil, const SubspacePair& pair);

/// Shifted operator N(λ,Q)^{-1} = λE - A + correction, factored dense.
struct ShiftedOperator {
  Complex lambda{};
  HForm form = HForm::qa_only;
  Factorization fact;
};

ShiftedOperator build_shifted_operator(const ProjectionPencil& pencil, const SubspacePair& pair,
                                       Complex lambda, HForm form);

/// H(λ) = F†A·P·N(λ,Q)·P·AE.  All HForm variants agree on the result.
Matrix h_general(const ProjectionPencil& pencil, const SubspacePair& pair, Complex lambda,
                 HForm form = HForm::qa_only);

struct RecoveredVectors {
  Vector z, y;  // residual parts: F†Ez = 0, E†Ey = 0
  Vector v, w;  // v = Eα + z, w = Fβ + y
};

RecoveredVectors recover_z_y(const ProjectionPencil& pencil, const SubspacePair& pair,
                             Complex lambda, const Vector& alpha, const Vector& beta,
                             HForm form = HForm::qa_only);

enum class InvarianceSide { right, left };

/// E ← E + (I-E)L (right) or F ← F + (I-E)M (left); A_rr + H(λ) is
/// invariant and the normalization is untouched.
SubspacePair invariance_shift(const SubspacePair& pair, const ProjectionPencil& pencil,
                              const Matrix& L, InvarianceSide side);

/// Linear fixed-point iteration with fixed subspaces.
SolveResult algorithm3(const ProjectionPencil& pencil, const SubspacePair& pair,
                       const ModeSelector& selector, const SolverOptions& opts = {});

/// Superlinear variant: the pair is refreshed every iteration so its span
/// contains the latest eigenvector estimates.
SolveResult algorithm4(const ProjectionPencil& pencil, const SubspacePair& pair0,
                       const ModeSelector& selector, const SolverOptions& opts = {});

/// Least-squares slope of log ε_{j+1} against log ε_j over the final window.
/// Requires at least four strictly decreasing entries.
double order_estimate(const std::vector<double>& errors, int window = 4);

/// Order fit on the |Δλ| sequence of a report (roundoff-floor entries are
/// discarded first).  Throws InsufficientData like order_estimate.
double convergence_order_estimate(const ConvergenceReport& report, int window = 4);

}  // namespace gsma
