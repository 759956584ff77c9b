#pragma once

#include <memory>
#include <vector>

#include "gsma/linalg.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// The problem instance λEv = Av with E a symmetric, possibly singular,
/// projection matrix.  E and A are validated on construction and stored
/// sparse; dense copies are materialized lazily for the dense code paths.
class ProjectionPencil {
 public:
  ProjectionPencil(SparseMatrix E, SparseMatrix A);
  ProjectionPencil(const Matrix& E, const Matrix& A);

  Index dimension() const { return m_; }
  const SparseMatrix& E() const { return E_; }
  const SparseMatrix& A() const { return A_; }
  const Matrix& dense_E() const;
  const Matrix& dense_A() const;

  Index rank_E() const { return rank_E_; }  // trace of the projection
  double norm_E() const { return norm_E_; }
  double norm_A() const { return norm_A_; }

 private:
  void validate();

  SparseMatrix E_, A_;
  Index m_ = 0;
  Index rank_E_ = 0;
  double norm_E_ = 0, norm_A_ = 0;
  struct DenseCache;
  std::shared_ptr<DenseCache> cache_;
};

/// Right/left relevant bases E (m×n) and F (m×n) with F†EE = I_n.
struct SubspacePair {
  Matrix basis_right;  // E
  Matrix basis_left;   // F
  Index n() const { return basis_right.cols(); }
};

/// Enforces F†EE = I_n by correcting the left basis only; throws
/// DegenerateSubspace when F†EE is numerically singular or a basis column
/// lies in the kernel of E.
SubspacePair normalize_pair(const Matrix& basis_right_raw, const Matrix& basis_left_raw,
                            const ProjectionPencil& pencil);

struct Projectors {
  Matrix Q;  // E E F†E
  Matrix P;  // I - Q
};

Projectors projectors(const SubspacePair& pair, const ProjectionPencil& pencil);

/// v = E·alpha + z with F†Ez = 0; alpha = F†Ev.
std::pair<Vector, Vector> decompose_right(const Vector& v, const SubspacePair& pair,
                                          const ProjectionPencil& pencil);
/// w = F·beta + y with E†Ey = 0; beta = E†Ew.
std::pair<Vector, Vector> decompose_left(const Vector& w, const SubspacePair& pair,
                                         const ProjectionPencil& pencil);

struct ParticipationRatio {
  Complex value{};
  bool infinite = false;
  double magnitude() const;
};

ParticipationRatio participation_ratio(const Vector& v, const Vector& w, const Projectors& proj,
                                       const ProjectionPencil& pencil);
/// Same ratio without materializing Q (used inside the iteration loops).
ParticipationRatio participation_ratio(const Vector& v, const Vector& w, const SubspacePair& pair,
                                       const ProjectionPencil& pencil);

/// (right, left) relative residuals of the eigenpair candidate.
std::pair<double, double> residual(const ProjectionPencil& pencil, Complex lambda, const Vector& v,
                                   const Vector& w);

struct OracleMode {
  Complex lambda;
  Vector v;  // unit norm
  Vector w;  // w†Ev = 1 unless degenerate
  bool degenerate_pairing = false;
};

struct OracleSpectrum {
  std::vector<OracleMode> modes;   // all finite eigenvalues, sorted by (Re, Im)
  Index infinite_count = 0;        // static modes, reported as a count only
};

/// Dense brute-force reference: orthogonally diagonalizes E, eliminates the
/// static block, and eigensolves the condensed dynamic matrix.  Throws
/// NotSolvable when the static-static block is singular.
OracleSpectrum oracle_full_spectrum(const ProjectionPencil& pencil);

}  // namespace gsma
