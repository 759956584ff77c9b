#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsma/types.hpp"

namespace gsma {

struct VerifyOptions {
  std::uint64_t seed = 12345;
  int seed_count = 1;
  double fault = 0.0;  // debug: perturb one side of each identity
};

struct VerifyCheck {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = true;
};

/// Cross-module identity suite on seeded random instances: classical
/// equivalence, subspace-shift invariance, the direct-form identities,
/// the low-rank-update path and the composite two-path assembly.
VerifyReport run_identity_suite(const VerifyOptions& options);

}  // namespace gsma
