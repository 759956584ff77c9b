#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace gsma {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using SparseVector = Eigen::SparseVector<Complex>;
using Index = Eigen::Index;

/// Correction added to λE - A when forming the shifted operator N(λ,Q).
/// All three give the same H(λ); the anticommutator is the symmetric one,
/// the one-sided forms are cheaper and stay regular at λ = 0.
enum class HForm { anticommutator, qa_only, aq_only };

/// Subspace refresh policy for the superlinear algorithms.
enum class SubspaceUpdate { none, full_eigenvector, zeroed_static };

enum class SolveStatus { converged, diverged, max_iterations };

struct SolverOptions {
  double tol = 1e-10;          // relative eigenvalue tolerance
  int max_iter = 50;
  int divergence_window = 5;   // consecutive error growths before giving up
  SubspaceUpdate subspace_update = SubspaceUpdate::full_eigenvector;
  HForm h_form = HForm::qa_only;
};

struct IterateRecord {
  Complex lambda{};
  double delta_abs = 0.0;   // |λ_j - λ_{j-1}|
  double residual = std::numeric_limits<double>::quiet_NaN();
  Complex rho_est{};        // participation-ratio estimate from recovered vectors
  bool rho_infinite = false;
};

struct ConvergenceReport {
  std::vector<IterateRecord> iterates;
  std::optional<double> order_fit;
  SolveStatus status = SolveStatus::max_iterations;
};

/// One iterate / converged mode: eigenvalue, reduced coordinates and,
/// when recovered, the full-space eigenvectors.  v satisfies
/// F†E(v - Eα) = 0 and the dual constraint holds for w.
struct ModeEstimate {
  Complex lambda{};
  Vector alpha;
  Vector beta;
  Vector v;  // empty when not recovered
  Vector w;  // empty when not recovered
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool degenerate_pairing = false;  // w†Ev vanished; w left at unit norm
};

struct SolveResult {
  ModeEstimate mode;
  ConvergenceReport report;
};

struct MultiSolveResult {
  std::vector<ModeEstimate> modes;
  std::vector<ConvergenceReport> reports;
};

}  // namespace gsma
