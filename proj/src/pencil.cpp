#include "gsma/pencil.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "gsma/errors.hpp"

namespace gsma {

struct ProjectionPencil::DenseCache {
  std::once_flag once_E, once_A;
  Matrix E, A;
};

ProjectionPencil::ProjectionPencil(SparseMatrix E, SparseMatrix A)
    : E_(std::move(E)), A_(std::move(A)), cache_(std::make_shared<DenseCache>()) {
  E_.makeCompressed();
  A_.makeCompressed();
  validate();
}

ProjectionPencil::ProjectionPencil(const Matrix& E, const Matrix& A)
    : E_(E.sparseView()), A_(A.sparseView()), cache_(std::make_shared<DenseCache>()) {
  validate();
}

void ProjectionPencil::validate() {
  if (E_.rows() != E_.cols() || A_.rows() != A_.cols() || E_.rows() != A_.rows())
    throw DimensionMismatch("pencil: E and A must be square with equal dimension");
  m_ = E_.rows();
  norm_E_ = norm_inf(E_);
  norm_A_ = norm_inf(A_);

  for (Index k = 0; k < E_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(E_, k); it; ++it)
      if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
        throw InvalidArgument("pencil: non-finite entry in E");
  for (Index k = 0; k < A_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A_, k); it; ++it)
      if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
        throw InvalidArgument("pencil: non-finite entry in A");

  // E must be a symmetric projection: E² = E = Eᵀ = E†.
  const double sym_err = norm_inf(SparseMatrix(E_ - SparseMatrix(E_.transpose())));
  const double herm_err = norm_inf(SparseMatrix(E_ - SparseMatrix(E_.adjoint())));
  if (sym_err > 1e-12 * (1.0 + norm_E_) || herm_err > 1e-12 * (1.0 + norm_E_))
    throw InvalidArgument("pencil: E is not symmetric");
  const double idem_err = norm_inf(SparseMatrix(SparseMatrix(E_ * E_) - E_));
  if (idem_err > 1e-10 * (1.0 + norm_E_))
    throw InvalidArgument("pencil: E is not idempotent");

  Complex tr = 0;
  for (Index k = 0; k < E_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(E_, k); it; ++it)
      if (it.row() == it.col()) tr += it.value();
  rank_E_ = static_cast<Index>(std::llround(tr.real()));
}

const Matrix& ProjectionPencil::dense_E() const {
  std::call_once(cache_->once_E, [&] { cache_->E = Matrix(E_); });
  return cache_->E;
}

const Matrix& ProjectionPencil::dense_A() const {
  std::call_once(cache_->once_A, [&] { cache_->A = Matrix(A_); });
  return cache_->A;
}

SubspacePair normalize_pair(const Matrix& basis_right_raw, const Matrix& basis_left_raw,
                            const ProjectionPencil& pencil) {
  const Index m = pencil.dimension();
  if (basis_right_raw.rows() != m || basis_left_raw.rows() != m ||
      basis_right_raw.cols() != basis_left_raw.cols() || basis_right_raw.cols() == 0)
    throw DimensionMismatch("normalize_pair: bases must be m×n with matching n ≥ 1");

  for (Index j = 0; j < basis_right_raw.cols(); ++j) {
    if ((pencil.E() * basis_right_raw.col(j)).norm() < 1e-12 * basis_right_raw.col(j).norm())
      throw DegenerateSubspace("normalize_pair: right basis column lies in ker E");
    if ((pencil.E() * basis_left_raw.col(j)).norm() < 1e-12 * basis_left_raw.col(j).norm())
      throw DegenerateSubspace("normalize_pair: left basis column lies in ker E");
  }

  const Matrix G = basis_left_raw.adjoint() * (pencil.E() * basis_right_raw);
  const Index n = G.rows();
  Eigen::PartialPivLU<Matrix> lu(G);
  double det_scale = 1.0;
  for (Index i = 0; i < n; ++i) det_scale *= std::abs(lu.matrixLU()(i, i));
  det_scale = std::pow(det_scale, 1.0 / static_cast<double>(n));
  if (!(det_scale > 1e-12 * std::max(1.0, G.norm())))
    throw DegenerateSubspace("normalize_pair: F†EE numerically singular");

  SubspacePair pair;
  pair.basis_right = basis_right_raw;
  // F ← F·G^{-†} so that F†EE = G^{-1}·G = I_n.
  pair.basis_left = lu.solve(basis_left_raw.adjoint()).adjoint();
  return pair;
}

Projectors projectors(const SubspacePair& pair, const ProjectionPencil& pencil) {
  if (pair.basis_right.rows() != pencil.dimension())
    throw DimensionMismatch("projectors: pair does not match pencil dimension");
  Projectors proj;
  const Matrix EE = pencil.E() * pair.basis_right;
  const Matrix FE = pencil.E() * pair.basis_left;
  proj.Q = EE * FE.adjoint();
  proj.P = Matrix::Identity(pencil.dimension(), pencil.dimension()) - proj.Q;
  return proj;
}

std::pair<Vector, Vector> decompose_right(const Vector& v, const SubspacePair& pair,
                                          const ProjectionPencil& pencil) {
  if (v.size() != pencil.dimension()) throw DimensionMismatch("decompose_right: bad vector size");
  Vector alpha = pair.basis_left.adjoint() * (pencil.E() * v);
  Vector z = v - pair.basis_right * alpha;
  return {std::move(alpha), std::move(z)};
}

std::pair<Vector, Vector> decompose_left(const Vector& w, const SubspacePair& pair,
                                         const ProjectionPencil& pencil) {
  if (w.size() != pencil.dimension()) throw DimensionMismatch("decompose_left: bad vector size");
  Vector beta = pair.basis_right.adjoint() * (pencil.E() * w);
  Vector y = w - pair.basis_left * beta;
  return {std::move(beta), std::move(y)};
}

double ParticipationRatio::magnitude() const {
  return infinite ? std::numeric_limits<double>::infinity() : std::abs(value);
}

namespace {

ParticipationRatio make_ratio(Complex num, Complex den) {
  ParticipationRatio rho;
  if (std::abs(den) == 0.0 || !std::isfinite(std::abs(num / den))) {
    rho.infinite = true;
    rho.value = Complex(std::numeric_limits<double>::infinity(), 0);
  } else {
    rho.value = num / den;
  }
  return rho;
}

}  // namespace

ParticipationRatio participation_ratio(const Vector& v, const Vector& w, const Projectors& proj,
                                       const ProjectionPencil& pencil) {
  if (v.size() != pencil.dimension() || w.size() != pencil.dimension())
    throw DimensionMismatch("participation_ratio: bad vector size");
  const Complex num = w.dot(proj.Q * v);
  const Complex den = w.dot(pencil.E() * v) - num;
  return make_ratio(num, den);
}

ParticipationRatio participation_ratio(const Vector& v, const Vector& w, const SubspacePair& pair,
                                       const ProjectionPencil& pencil) {
  const Vector Ev = pencil.E() * v;
  const Vector Ew = pencil.E() * w;
  // w†Qv = (w†EE)(F†Ev)
  const Complex num =
      ((Ew.adjoint() * pair.basis_right) * (pair.basis_left.adjoint() * Ev)).value();
  const Complex den = w.dot(Ev) - num;
  return make_ratio(num, den);
}

std::pair<double, double> residual(const ProjectionPencil& pencil, Complex lambda, const Vector& v,
                                   const Vector& w) {
  const double scale = pencil.norm_A() + std::abs(lambda) * pencil.norm_E();
  double right = std::numeric_limits<double>::quiet_NaN();
  double left = std::numeric_limits<double>::quiet_NaN();
  if (v.size() == pencil.dimension() && v.norm() > 0)
    right = (pencil.A() * v - lambda * (pencil.E() * v)).norm() / (scale * v.norm());
  if (w.size() == pencil.dimension() && w.norm() > 0)
    left = (pencil.A().adjoint() * w - std::conj(lambda) * (pencil.E() * w)).norm() /
           (scale * w.norm());
  return {right, left};
}

OracleSpectrum oracle_full_spectrum(const ProjectionPencil& pencil) {
  const Index m = pencil.dimension();
  if (m > dense_limit()) throw InvalidArgument("oracle: dimension exceeds dense limit");

  // E = U diag(I_r, 0) U†; SelfAdjoint eigenvalues come back ascending, so
  // reverse to put the dynamic block first.
  Eigen::SelfAdjointEigenSolver<Matrix> es(pencil.dense_E());
  if (es.info() != Eigen::Success) throw NoConvergence("oracle: eigenanalysis of E failed");
  const Index r = pencil.rank_E();
  Matrix U(m, m);
  for (Index i = 0; i < m; ++i) U.col(i) = es.eigenvectors().col(m - 1 - i);

  const Matrix At = U.adjoint() * pencil.dense_A() * U;
  const Index s = m - r;

  OracleSpectrum out;
  out.infinite_count = s;
  if (r == 0) return out;

  Matrix S;           // condensed dynamic matrix
  Matrix back_right;  // x_s = back_right · x_d
  Matrix back_left;   // w_s = back_left · w_d  (adjoint chain)
  if (s > 0) {
    const Matrix Ass = At.bottomRightCorner(s, s);
    Factorization f;
    try {
      f = factor(Ass);
    } catch (const SingularMatrix&) {
      throw NotSolvable("oracle: static-static block is singular");
    }
    if (f.condition_estimate() > 1e12)
      throw NotSolvable("oracle: static-static block numerically singular");
    back_right = -f.solve(Matrix(At.bottomLeftCorner(s, r)));
    // w_s† = -w_d† A_ds A_ss^{-1}  ⇒  w_s = -A_ss^{-†} A_ds† w_d
    back_left = -f.solve_adjoint(Matrix(At.topRightCorner(r, s).adjoint()));
    S = At.topLeftCorner(r, r) + At.topRightCorner(r, s) * back_right;
  } else {
    S = At;
  }

  EigDecomposition eig = eig_dense(S);

  std::vector<Index> order(static_cast<size_t>(r));
  for (Index i = 0; i < r; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Complex la = eig.eigenvalues[a], lb = eig.eigenvalues[b];
    if (la.real() != lb.real()) return la.real() < lb.real();
    return la.imag() < lb.imag();
  });

  for (Index idx : order) {
    OracleMode mode;
    mode.lambda = eig.eigenvalues[idx];
    Vector vt(m), wt(m);
    vt.head(r) = eig.right.col(idx);
    wt.head(r) = eig.left.col(idx);
    if (s > 0) {
      vt.tail(s) = back_right * eig.right.col(idx);
      wt.tail(s) = back_left * eig.left.col(idx);
    }
    mode.v = U * vt;
    mode.w = U * wt;
    mode.v /= mode.v.norm();
    const Complex pairing = mode.w.dot(pencil.E() * mode.v);
    if (std::abs(pairing) > 1e-12 * mode.w.norm()) {
      mode.w /= std::conj(pairing);
    } else {
      mode.w /= mode.w.norm();
      mode.degenerate_pairing = true;
    }
    out.modes.push_back(std::move(mode));
  }
  return out;
}

}  // namespace gsma
