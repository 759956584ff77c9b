#include "gsma/sherman_morrison.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "gsma/errors.hpp"

namespace gsma {

namespace {

Vector to_dense(const SparseVector& v, Index m) {
  Vector out = Vector::Zero(m);
  for (SparseVector::InnerIterator it(v); it; ++it) out[it.index()] = it.value();
  return out;
}

SparseMatrix rank_one(const SparseVector& eta, const SparseVector& phi, Index m) {
  std::vector<Eigen::Triplet<Complex>> trips;
  for (SparseVector::InnerIterator ei(eta); ei; ++ei)
    for (SparseVector::InnerIterator pi(phi); pi; ++pi)
      trips.emplace_back(ei.index(), pi.index(), ei.value() * std::conj(pi.value()));
  SparseMatrix M(m, m);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

// Indices of the largest-magnitude entries, descending.
std::vector<Index> rank_by_magnitude(const Vector& v) {
  std::vector<Index> idx(static_cast<size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index(0));
  std::sort(idx.begin(), idx.end(),
            [&](Index a, Index b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

constexpr double kCondCap = 1e12;

}  // namespace

std::pair<SparseVector, SparseVector> choose_regularizers(const ProjectionPencil& pencil,
                                                          Complex lambda, int max_attempts) {
  const Index m = pencil.dimension();
  const SparseMatrix shifted = lambda * pencil.E() - pencil.A();

  SparseVector zero(m);
  bool have_base = false;
  Factorization f0;
  try {
    f0 = factor(shifted);
    have_base = true;
    if (f0.condition_estimate() <= kCondCap) return {zero, zero};
  } catch (const SingularMatrix&) {
  }

  // λ sits (numerically) on an eigenvalue: estimate the deficiency
  // directions by inverse iteration, with an ε-shifted factorization as a
  // fallback when the exact factorization broke down.
  Factorization probe;
  if (have_base) {
    probe = f0;
  } else {
    const double eps = 1e-12 * (pencil.norm_A() + std::abs(lambda) * pencil.norm_E() + 1.0);
    SparseMatrix shifted_eps = shifted;
    SparseMatrix ident(m, m);
    ident.setIdentity();
    shifted_eps += eps * ident;
    try {
      probe = factor(shifted_eps);
    } catch (const SingularMatrix&) {
      throw RegularizationFailed("choose_regularizers: cannot probe the deficiency direction");
    }
  }

  std::mt19937_64 rng(0x9e37c0de1234ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector b(m);
  for (Index i = 0; i < m; ++i) b[i] = Complex(gauss(rng), gauss(rng));
  Vector u_right = probe.solve(b);
  u_right /= std::max(u_right.norm(), 1e-300);
  u_right = probe.solve(u_right);
  u_right /= std::max(u_right.norm(), 1e-300);
  for (Index i = 0; i < m; ++i) b[i] = Complex(gauss(rng), gauss(rng));
  Vector u_left = probe.solve_adjoint(b);
  u_left /= std::max(u_left.norm(), 1e-300);
  u_left = probe.solve_adjoint(u_left);
  u_left /= std::max(u_left.norm(), 1e-300);

  const auto rows = rank_by_magnitude(u_left);
  const auto cols = rank_by_magnitude(u_right);
  const double magnitude = std::max(pencil.norm_A(), 1.0);

  for (int attempt = 1; attempt < max_attempts; ++attempt) {
    const Index p = rows[static_cast<size_t>((attempt - 1) % m)];
    const Index q = cols[static_cast<size_t>((attempt - 1) % m)];
    SparseVector eta(m), phi(m);
    eta.insert(p) = Complex(magnitude, 0);
    phi.insert(q) = Complex(1, 0);
    try {
      Factorization f = factor(SparseMatrix(shifted + rank_one(eta, phi, m)));
      if (f.condition_estimate() <= kCondCap) return {eta, phi};
    } catch (const SingularMatrix&) {
    }
  }
  throw RegularizationFailed("choose_regularizers: no rank-1 update regularized the base matrix");
}

SmwFactorization smw_factor(const ProjectionPencil& pencil, const SubspacePair& pair,
                            Complex lambda, const SparseVector& eta, const SparseVector& phi) {
  const Index m = pencil.dimension();
  const Index n = pair.n();
  if (n < 1) throw InvalidArgument("smw_factor: pair must have at least one column");

  SmwFactorization f;
  f.m = m;
  f.n = n;

  SparseMatrix base_matrix = lambda * pencil.E() - pencil.A();
  if (eta.nonZeros() > 0 && phi.nonZeros() > 0) base_matrix += rank_one(eta, phi, m);
  base_matrix.makeCompressed();
  f.base = factor(base_matrix);
  f.audit.base_nnz = base_matrix.nonZeros();

  const Matrix EE = pencil.E() * pair.basis_right;  // m×n
  const Matrix EF = pencil.E() * pair.basis_left;   // m×n
  f.audit.record(m, n);

  const Index width = 2 * n + 1;
  f.U = Matrix::Zero(m, width);
  f.U.col(0) = to_dense(eta, m);
  f.U.middleCols(1, n) = -(pencil.A() * EE);
  f.U.middleCols(1 + n, n) = -EE;
  f.audit.record(m, width);

  f.Vh = Matrix::Zero(width, m);
  f.Vh.row(0) = to_dense(phi, m).adjoint();
  f.Vh.middleRows(1, n) = EF.adjoint();                            // F†E
  f.Vh.middleRows(1 + n, n) = (pencil.A().adjoint() * EF).adjoint();  // F†EA
  f.audit.record(width, m);

  f.base_iU = f.base.solve(f.U);
  f.audit.record(m, width);

  const Matrix capacitance = Matrix::Identity(width, width) - f.Vh * f.base_iU;
  f.audit.record(width, width);
  try {
    f.core = factor(capacitance);
  } catch (const SingularMatrix&) {
    throw SingularCapacitance("smw_factor: capacitance matrix singular for this (λ, Q)");
  }
  return f;
}

Matrix smw_apply(const SmwFactorization& f, const Matrix& B) {
  if (B.rows() != f.m) throw DimensionMismatch("smw_apply: bad right-hand side");
  const Matrix x0 = f.base.solve(B);
  return x0 + f.base_iU * f.core.solve(Matrix(f.Vh * x0));
}

Vector smw_apply(const SmwFactorization& f, const Vector& b) {
  return Vector(smw_apply(f, Matrix(b)));
}

Matrix h_general_smw(const ProjectionPencil& pencil, const SubspacePair& pair, Complex lambda) {
  auto [eta, phi] = choose_regularizers(pencil, lambda);
  SmwFactorization f = smw_factor(pencil, pair, lambda, eta, phi);

  const Matrix EE = pencil.E() * pair.basis_right;
  const Matrix EF = pencil.E() * pair.basis_left;
  auto apply_P = [&](const Matrix& X) -> Matrix { return X - EE * (EF.adjoint() * X); };

  const Matrix AE = pencil.A() * pair.basis_right;
  const Matrix X = smw_apply(f, apply_P(AE));
  const Matrix FA = (pencil.A().adjoint() * pair.basis_left).adjoint();
  return FA * apply_P(X);
}

}  // namespace gsma
