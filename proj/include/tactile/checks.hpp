#pragma once

// Quantitative device checks shared by `tactile check` and the tests.

#include <string>
#include <vector>

#include "tactile/session.hpp"

namespace tactile::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr int kMinEffectiveSteps = 100;
inline constexpr int kMaxEffectiveSteps = 110;
inline constexpr double kMinCouplingScore = 0.3;
inline constexpr double kCouplingOverBaseline = 3.0;

CheckResult effective_resolution(const session::SessionConfig& cfg);
CheckResult level_census(const session::SessionConfig& cfg);
CheckResult rate_exactness(const session::SessionConfig& cfg);
CheckResult coupling_vs_rigid(const session::SessionConfig& cfg);

std::vector<CheckResult> run_all(const session::SessionConfig& cfg);

}  // namespace tactile::checks
