#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace flp {

/// 32-bit linear congruential generator, state' = 1664525 * state + 1013904223 (mod 2^32).
///
/// Used for every random draw inside the filter: it is several times cheaper
/// than a Mersenne twister and bit-reproducible across platforms.
class Lcg {
 public:
  static constexpr std::uint32_t kMultiplier = 1664525u;
  static constexpr std::uint32_t kIncrement = 1013904223u;

  constexpr explicit Lcg(std::uint32_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint32_t state() const noexcept { return state_; }

  constexpr std::uint32_t next_u32() noexcept {
    state_ = kMultiplier * state_ + kIncrement;  // wraps mod 2^32
    return state_;
  }

  /// Uniform in [0, 1).
  constexpr double uniform() noexcept { return static_cast<double>(next_u32()) * 0x1p-32; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second variate is cached.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  double gaussian(double sigma) noexcept { return sigma * gaussian(); }

  /// Index in [0, n).
  std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::uint32_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// One step of the recurrence: returns the new state and state / 2^32.
constexpr std::pair<std::uint32_t, double> lcg_next(std::uint32_t state) noexcept {
  const std::uint32_t next = Lcg::kMultiplier * state + Lcg::kIncrement;
  return {next, static_cast<double>(next) * 0x1p-32};
}

}  // namespace flp
