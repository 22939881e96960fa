#pragma once

#include <algorithm>
#include <cmath>

namespace altsum {

/// Relative part of the shared relative-absolute tolerance.
inline constexpr double kDefaultRelTol = 1e-9;

/// rel * max(1, |a|, |b|). Shared by grid testers and inequality checks.
inline double hybrid_tolerance(double a, double b, double rel = kDefaultRelTol) {
  return rel * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace altsum
