#include "gsma/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <cstdlib>
#include <random>
#include <variant>

#include "gsma/errors.hpp"

namespace gsma {

Index dense_limit() {
  static const Index limit = [] {
    if (const char* env = std::getenv("GSMA_DENSE_LIMIT")) {
      long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<Index>(v);
    }
    return static_cast<Index>(2000);
  }();
  return limit;
}

double norm_inf(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return M.cwiseAbs().rowwise().sum().maxCoeff();
}

double norm_inf(const SparseMatrix& M) {
  if (M.rows() == 0) return 0.0;
  RealVector row_sums = RealVector::Zero(M.rows());
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      row_sums[it.row()] += std::abs(it.value());
  return row_sums.maxCoeff();
}

namespace {

using DenseLU = Eigen::PartialPivLU<Matrix>;
using SparseLUNatural = Eigen::SparseLU<SparseMatrix, Eigen::NaturalOrdering<int>>;
using SparseLUColamd = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

}  // namespace

struct Factorization::Impl {
  std::variant<DenseLU, std::unique_ptr<SparseLUNatural>, std::unique_ptr<SparseLUColamd>> lu;

  Matrix solve(const Matrix& B) const {
    return std::visit(
        [&](const auto& f) -> Matrix {
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, DenseLU>)
            return f.solve(B);
          else
            return f->solve(B);
        },
        lu);
  }
  Matrix solve_adjoint(const Matrix& B) const {
    return std::visit(
        [&](const auto& f) -> Matrix {
          if constexpr (std::is_same_v<std::decay_t<decltype(f)>, DenseLU>)
            return f.adjoint().solve(B);
          else
            return f->adjoint().solve(B);
        },
        lu);
  }
};

bool Factorization::sparse() const {
  return impl_ && !std::holds_alternative<DenseLU>(impl_->lu);
}

Matrix Factorization::solve(const Matrix& B) const {
  if (!impl_) throw InvalidArgument("solve on empty factorization");
  if (B.rows() != rows_) throw DimensionMismatch("solve: right-hand side has wrong row count");
  return impl_->solve(B);
}

Vector Factorization::solve(const Vector& b) const {
  return Vector(solve(Matrix(b)));
}

Matrix Factorization::solve_adjoint(const Matrix& B) const {
  if (!impl_) throw InvalidArgument("solve_adjoint on empty factorization");
  if (B.rows() != rows_) throw DimensionMismatch("solve_adjoint: right-hand side has wrong row count");
  return impl_->solve_adjoint(B);
}

Vector Factorization::solve_adjoint(const Vector& b) const {
  return Vector(solve_adjoint(Matrix(b)));
}

namespace {

// ||M^{-1}||_inf estimate from a few deterministic ±1 probes plus one
// sign-vector refinement.  Desk-scale accuracy is all that is needed here.
double inverse_norm_estimate(const Factorization::Impl& impl, Index n) {
  if (n == 0) return 0.0;
  std::mt19937_64 rng(0x5eed0451u);
  std::uniform_int_distribution<int> coin(0, 1);
  double best = 0.0;
  Vector worst = Vector::Zero(n);
  for (int probe = 0; probe < 3; ++probe) {
    Vector b(n);
    for (Index i = 0; i < n; ++i)
      b[i] = Complex(coin(rng) ? 1.0 : -1.0, coin(rng) ? 1.0 : -1.0) / std::sqrt(2.0);
    Vector x = impl.solve(b);
    double norm = x.cwiseAbs().maxCoeff();
    if (norm > best) {
      best = norm;
      worst = x;
    }
  }
  // refinement: re-solve with the sign pattern of the worst solution
  double wmax = worst.cwiseAbs().maxCoeff();
  if (wmax > 0) {
    Vector s(n);
    for (Index i = 0; i < n; ++i) {
      double a = std::abs(worst[i]);
      s[i] = a > 0 ? worst[i] / a : Complex(1, 0);
    }
    Vector x = impl.solve(s);
    best = std::max(best, x.cwiseAbs().maxCoeff());
  }
  return best;
}

}  // namespace

Factorization factor(const Matrix& M, double drop_tol) {
  if (M.rows() != M.cols()) throw InvalidArgument("factor: matrix must be square");
  const Index n = M.rows();
  auto impl = std::make_shared<Factorization::Impl>();
  impl->lu = DenseLU(M);
  const auto& lu = std::get<DenseLU>(impl->lu);
  const double scale = norm_inf(M);
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i)
    min_pivot = std::min(min_pivot, std::abs(lu.matrixLU()(i, i)));
  if (n > 0 && (scale == 0.0 || min_pivot <= drop_tol * scale))
    throw SingularMatrix("factor: pivot below drop tolerance");

  Factorization f;
  f.impl_ = std::move(impl);
  f.rows_ = n;
  f.cond_ = n == 0 ? 1.0 : scale * inverse_norm_estimate(*f.impl_, n);
  return f;
}

Factorization factor(const SparseMatrix& M, double drop_tol, SparseOrdering ordering) {
  if (M.rows() != M.cols()) throw InvalidArgument("factor: matrix must be square");
  const Index n = M.rows();
  const double scale = norm_inf(M);
  if (n > 0 && scale == 0.0) throw SingularMatrix("factor: zero matrix");

  auto impl = std::make_shared<Factorization::Impl>();
  SparseMatrix Mc = M;
  Mc.makeCompressed();
  bool ok = false;
  if (ordering == SparseOrdering::natural) {
    auto lu = std::make_unique<SparseLUNatural>();
    lu->isSymmetric(false);
    lu->compute(Mc);
    ok = lu->info() == Eigen::Success;
    impl->lu = std::move(lu);
  } else {
    auto lu = std::make_unique<SparseLUColamd>();
    lu->compute(Mc);
    ok = lu->info() == Eigen::Success;
    impl->lu = std::move(lu);
  }
  if (!ok) throw SingularMatrix("factor: sparse LU failed (structurally or numerically singular)");

  Factorization f;
  f.impl_ = std::move(impl);
  f.rows_ = n;
  f.cond_ = n == 0 ? 1.0 : scale * inverse_norm_estimate(*f.impl_, n);
  (void)drop_tol;  // SparseLU exposes no per-pivot hook; exact zero pivots
                   // surface through info(), near-singularity through cond_.
  return f;
}

namespace {

// Right and left eigenvectors of the Schur factor T (upper triangular),
// by back/forward substitution with guarded denominators.
void triangular_eigenvectors(const Matrix& T, Matrix& right, Matrix& left) {
  const Index n = T.rows();
  const double tiny = Eigen::NumTraits<double>::epsilon() * std::max(norm_inf(T), 1.0);
  right = Matrix::Zero(n, n);
  left = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const Complex lam = T(k, k);
    // right: (T - lam I) x = 0, x_k = 1, solve upward
    right(k, k) = Complex(1, 0);
    for (Index i = k - 1; i >= 0; --i) {
      Complex s = 0;
      for (Index j = i + 1; j <= k; ++j) s += T(i, j) * right(j, k);
      Complex d = T(i, i) - lam;
      if (std::abs(d) < tiny) d = Complex(tiny, 0);
      right(i, k) = -s / d;
    }
    // left: y† T = lam y†, y_k = 1, solve downward
    left(k, k) = Complex(1, 0);
    for (Index i = k + 1; i < n; ++i) {
      Complex s = 0;
      for (Index j = k; j < i; ++j) s += std::conj(T(j, i)) * left(j, k);
      Complex d = std::conj(T(i, i)) - std::conj(lam);
      if (std::abs(d) < tiny) d = Complex(tiny, 0);
      left(i, k) = -s / d;
    }
  }
}

}  // namespace

EigDecomposition eig_dense(const Matrix& M) {
  if (M.rows() != M.cols()) throw InvalidArgument("eig_dense: matrix must be square");
  if (M.rows() > dense_limit()) throw InvalidArgument("eig_dense: size exceeds dense limit");
  const Index n = M.rows();

  EigDecomposition d;
  d.eigenvalues.resize(n);
  d.right.resize(n, n);
  d.left.resize(n, n);
  d.degenerate_pairing.assign(static_cast<size_t>(n), false);
  if (n == 0) return d;

  Eigen::ComplexSchur<Matrix> schur(M, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw NoConvergence("eig_dense: Schur reduction did not converge");
  const Matrix& T = schur.matrixT();
  const Matrix& U = schur.matrixU();

  Matrix tr, tl;
  triangular_eigenvectors(T, tr, tl);
  d.right = U * tr;
  d.left = U * tl;

  for (Index k = 0; k < n; ++k) {
    d.eigenvalues[k] = T(k, k);
    double vn = d.right.col(k).norm();
    if (vn > 0) d.right.col(k) /= vn;
    Complex s = d.left.col(k).dot(d.right.col(k));  // w†v
    double wn = d.left.col(k).norm();
    if (std::abs(s) > 1e-12 * std::max(wn, 1.0)) {
      d.left.col(k) /= std::conj(s);
    } else {
      if (wn > 0) d.left.col(k) /= wn;
      d.degenerate_pairing[static_cast<size_t>(k)] = true;
    }
  }
  return d;
}

}  // namespace gsma
