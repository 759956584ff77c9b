#pragma once

#include <memory>
#include <vector>

#include "gsma/types.hpp"

namespace gsma {

/// Size cap for dense eigenanalysis (and the brute-force oracle).
/// Default 2000; the GSMA_DENSE_LIMIT environment variable overrides it.
Index dense_limit();

enum class SparseOrdering { natural, min_degree };

/// LU factorization of a square dense or sparse matrix.  Immutable after
/// construction; safe to share between threads.
class Factorization {
 public:
  Matrix solve(const Matrix& B) const;
  Vector solve(const Vector& b) const;
  /// Solves M†x = b (for left-eigenvector style systems).
  Matrix solve_adjoint(const Matrix& B) const;
  Vector solve_adjoint(const Vector& b) const;

  double condition_estimate() const { return cond_; }
  Index rows() const { return rows_; }
  bool sparse() const;

  struct Impl;

 private:
  friend Factorization factor(const Matrix&, double);
  friend Factorization factor(const SparseMatrix&, double, SparseOrdering);

  std::shared_ptr<const Impl> impl_;
  Index rows_ = 0;
  double cond_ = 0.0;
};

/// Throws SingularMatrix when a pivot magnitude falls below
/// drop_tol * ||M||_inf.
Factorization factor(const Matrix& M, double drop_tol = 1e-14);
Factorization factor(const SparseMatrix& M, double drop_tol = 1e-14,
                     SparseOrdering ordering = SparseOrdering::natural);

/// Full spectrum with right and left eigenvectors.  Right vectors have unit
/// norm; left vectors are scaled so w_i†v_i = 1 for simple eigenvalues
/// (defective pairings fall back to unit norm and are flagged).
struct EigDecomposition {
  Vector eigenvalues;
  Matrix right;
  Matrix left;
  std::vector<bool> degenerate_pairing;
  Index size() const { return eigenvalues.size(); }
};

EigDecomposition eig_dense(const Matrix& M);

double norm_inf(const Matrix& M);
double norm_inf(const SparseMatrix& M);

}  // namespace gsma
