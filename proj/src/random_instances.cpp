#include "gsma/random_instances.hpp"

#include <Eigen/Dense>

#include <random>

#include "gsma/errors.hpp"

namespace gsma {

namespace {

RealMatrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  RealMatrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = dist(rng);
  return M;
}

}  // namespace

RealMatrix random_orthogonal(std::uint64_t seed, Index m) {
  std::mt19937_64 rng(seed);
  Eigen::HouseholderQR<RealMatrix> qr(gaussian(rng, m, m));
  return qr.householderQ() * RealMatrix::Identity(m, m);
}

ProjectionPencil random_projection_pencil(std::uint64_t seed, Index m, Index rank) {
  if (rank < 0 || rank > m) throw InvalidArgument("random_projection_pencil: bad rank");
  std::mt19937_64 rng(seed);
  const RealMatrix U = random_orthogonal(rng(), m);
  const RealMatrix Ur = U.leftCols(rank);
  RealMatrix E = Ur * Ur.transpose();
  const RealMatrix A = gaussian(rng, m, m);
  return ProjectionPencil(Matrix(E.cast<Complex>()), Matrix(A.cast<Complex>()));
}

SubspacePair random_normalized_pair(std::uint64_t seed, const ProjectionPencil& pencil, Index n,
                                    bool complex_entries) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix right = gaussian(rng, pencil.dimension(), n).cast<Complex>();
    Matrix left = gaussian(rng, pencil.dimension(), n).cast<Complex>();
    if (complex_entries) {
      right += Complex(0, 1) * gaussian(rng, pencil.dimension(), n).cast<Complex>();
      left += Complex(0, 1) * gaussian(rng, pencil.dimension(), n).cast<Complex>();
    }
    try {
      return normalize_pair(right, left, pencil);
    } catch (const DegenerateSubspace&) {
      continue;
    }
  }
  throw DegenerateSubspace("random_normalized_pair: could not draw a non-degenerate pair");
}

PartitionedSystem random_partitioned_system(std::uint64_t seed, Index m, Index n) {
  std::mt19937_64 rng(seed);
  return PartitionedSystem::split(Matrix(gaussian(rng, m, m).cast<Complex>()), n);
}

std::pair<ProjectionPencil, SubspacePair> canonical_embedding(const PartitionedSystem& sys) {
  const Index m = sys.m(), n = sys.n();
  SparseMatrix E(m, m);
  E.setIdentity();
  ProjectionPencil pencil(E, SparseMatrix(sys.assemble().sparseView()));
  SubspacePair pair;
  pair.basis_right = Matrix::Zero(m, n);
  pair.basis_right.topRows(n) = Matrix::Identity(n, n);
  pair.basis_left = pair.basis_right;
  return {std::move(pencil), std::move(pair)};
}

}  // namespace gsma
