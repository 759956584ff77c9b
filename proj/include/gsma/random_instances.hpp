#pragma once

#include <cstdint>

#include "gsma/classical.hpp"
#include "gsma/pencil.hpp"

namespace gsma {

/// Real orthogonal matrix from the QR factor of a seeded Gaussian sample.
RealMatrix random_orthogonal(std::uint64_t seed, Index m);

/// Solvable-by-construction random pencil: E = U diag(I_r, 0) Uᵀ with random
/// orthogonal U, A a real Gaussian matrix.
ProjectionPencil random_projection_pencil(std::uint64_t seed, Index m, Index rank);

/// Random normalized pair with n columns (Gaussian bases, complex when
/// requested).
SubspacePair random_normalized_pair(std::uint64_t seed, const ProjectionPencil& pencil, Index n,
                                    bool complex_entries = false);

/// Random partitioned standard system (E = I) with n relevant states.
PartitionedSystem random_partitioned_system(std::uint64_t seed, Index m, Index n);

/// The canonical embedding of a partitioned system: E = I_m, bases [I_n; 0].
std::pair<ProjectionPencil, SubspacePair> canonical_embedding(const PartitionedSystem& sys);

}  // namespace gsma
