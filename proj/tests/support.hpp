#pragma once

// Shared helpers for the test suites.

#include <Eigen/Dense>

#include <random>

#include "gsma/pencil.hpp"
#include "gsma/random_instances.hpp"
#include "gsma/types.hpp"

namespace gsma::testsupport {

inline Matrix random_complex(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = Complex(dist(rng), dist(rng));
  return M;
}

inline Vector random_complex_vector(std::mt19937_64& rng, Index n) {
  return Vector(random_complex(rng, n, 1));
}

struct PerturbedPair {
  SubspacePair pair;
  OracleMode target;
  double rho_abs = 0.0;
};

/// Pair built from an oracle eigenpair with a relative Gaussian perturbation,
/// redrawn until the participation ratio clears rho_min.  When the full
/// spectrum is supplied, draws whose Rayleigh estimate F†AE falls nearer to a
/// different eigenvalue are also rejected — the neighborhood hypothesis of
/// the superlinear algorithms.
inline PerturbedPair perturbed_oracle_pair(const ProjectionPencil& pencil,
                                           const OracleMode& target, double rel,
                                           std::uint64_t seed, double rho_min = 1.0,
                                           const OracleSpectrum* spectrum = nullptr,
                                           int max_draws = 256) {
  std::mt19937_64 rng(seed);
  for (int draw = 0; draw < max_draws; ++draw) {
    Vector e = target.v + rel * target.v.norm() * random_complex_vector(rng, target.v.size()).normalized();
    Vector f = target.w + rel * target.w.norm() * random_complex_vector(rng, target.w.size()).normalized();
    SubspacePair pair;
    try {
      pair = normalize_pair(e, f, pencil);
    } catch (const DegenerateSubspace&) {
      continue;
    }
    const ParticipationRatio rho = participation_ratio(target.v, target.w, pair, pencil);
    if (!(rho.magnitude() > rho_min)) continue;
    if (spectrum) {
      const Complex rayleigh =
          (pair.basis_left.adjoint() * (pencil.A() * pair.basis_right))(0, 0);
      double target_dist = std::abs(rayleigh - target.lambda);
      bool nearest = true;
      for (const auto& mode : spectrum->modes)
        if (std::abs(rayleigh - mode.lambda) < target_dist) nearest = false;
      if (!nearest) continue;
    }
    return {std::move(pair), target, rho.magnitude()};
  }
  throw std::runtime_error("perturbed_oracle_pair: no admissible draw found");
}

/// Oracle mode with eigenvalue closest to lambda.
inline const OracleMode& nearest_mode(const OracleSpectrum& spectrum, Complex lambda) {
  size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < spectrum.modes.size(); ++k) {
    const double d = std::abs(spectrum.modes[k].lambda - lambda);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return spectrum.modes[best];
}

/// Oracle mode whose eigenvector has the largest normalized overlap with v.
inline size_t max_overlap_mode(const OracleSpectrum& spectrum, const Vector& v) {
  size_t best = 0;
  double best_o = -1.0;
  for (size_t k = 0; k < spectrum.modes.size(); ++k) {
    const double o = std::abs(spectrum.modes[k].v.dot(v)) / (spectrum.modes[k].v.norm() * v.norm());
    if (o > best_o) {
      best_o = o;
      best = k;
    }
  }
  return best;
}

inline double overlap(const Vector& a, const Vector& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace gsma::testsupport
