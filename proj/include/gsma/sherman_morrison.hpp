#pragma once

#include "gsma/pencil.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// Sparse η, φ making λE - A + ηφ† regular even when λ sits on an eigenvalue
/// of the pencil.  Returns empty vectors when no regularization is needed.
/// Throws RegularizationFailed after max_attempts rank-1 candidates.
std::pair<SparseVector, SparseVector> choose_regularizers(const ProjectionPencil& pencil,
                                                          Complex lambda, int max_attempts = 5);

/// Sizes of everything smw_factor materializes; lets tests assert the sparse
/// path never forms a dense m×m matrix.
struct SmwAudit {
  Index base_nnz = 0;
  Index max_dense_rows = 0;
  Index max_dense_cols = 0;
  void record(Index r, Index c) {
    if (r * c > max_dense_rows * max_dense_cols) {
      max_dense_rows = r;
      max_dense_cols = c;
    }
  }
};

/// N(λ) = {λE - A + [A,Q]_+}^{-1} via the low-rank update: one sparse LU of
/// λE - A + ηφ† plus a dense LU of the (2n+1)×(2n+1) capacitance matrix.
struct SmwFactorization {
  Index m = 0, n = 0;
  Factorization base;
  Matrix U;        // m×(2n+1): [η, -A·EE, -EE]
  Matrix Vh;       // (2n+1)×m: [φ†; F†E; F†EA]
  Matrix base_iU;  // base^{-1}·U
  Factorization core;
  SmwAudit audit;
};

SmwFactorization smw_factor(const ProjectionPencil& pencil, const SubspacePair& pair,
                            Complex lambda, const SparseVector& eta, const SparseVector& phi);

/// x = N(λ)·b; block right-hand sides supported.
Matrix smw_apply(const SmwFactorization& f, const Matrix& B);
Vector smw_apply(const SmwFactorization& f, const Vector& b);

/// H(λ) through the sparse path; picks regularizers internally.
Matrix h_general_smw(const ProjectionPencil& pencil, const SubspacePair& pair, Complex lambda);

}  // namespace gsma
