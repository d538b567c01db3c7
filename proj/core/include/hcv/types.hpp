#pragma once

#include <complex>
#include <cstdint>

namespace hcv {

using Complex = std::complex<double>;
using Index = std::int64_t;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Default relative margin for strict inequalities.
inline constexpr double kStrictMargin = 1e-12;
// Absolute tolerance for comparisons against sector boundaries.
inline constexpr double kBoundaryTol = 1e-12;

inline Complex from_turns(double r, double turns) {
  return std::polar(r, kTwoPi * turns);
}

}  // namespace hcv
