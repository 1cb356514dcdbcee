#pragma once

#include <cmath>
#include <numbers>

namespace flp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Wraps to [0, 2*pi).
inline double wrap_two_pi(double a) noexcept {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Wraps to (-pi, pi].
inline double wrap_pi(double a) noexcept {
  double r = wrap_two_pi(a);
  if (r > kPi) r -= kTwoPi;
  return r;
}

/// Smallest signed angle from b to a.
inline double angle_diff(double a, double b) noexcept { return wrap_pi(a - b); }

}  // namespace flp
