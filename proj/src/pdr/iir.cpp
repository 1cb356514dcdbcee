#include "flp/pdr/iir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flp/common/error.hpp"

namespace flp::pdr {

namespace {

void check_design(double cutoff_hz, double fs) {
  if (!(fs > 0.0) || !(cutoff_hz > 0.0) || cutoff_hz >= fs / 2.0)
    fail(ErrorCode::InvalidArgument, "filter cutoff must lie in (0, fs/2)");
}

}  // namespace

Biquad Biquad::butterworth_lowpass(double cutoff_hz, double fs) {
  check_design(cutoff_hz, fs);
  const double k = std::tan(std::numbers::pi * cutoff_hz / fs);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
  const double b0 = k2 * norm;
  return Biquad({b0, 2.0 * b0, b0}, {2.0 * (k2 - 1.0) * norm, (1.0 - std::numbers::sqrt2 * k + k2) * norm});
}

Biquad Biquad::butterworth_highpass(double cutoff_hz, double fs) {
  check_design(cutoff_hz, fs);
  const double k = std::tan(std::numbers::pi * cutoff_hz / fs);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
  return Biquad({norm, -2.0 * norm, norm}, {2.0 * (k2 - 1.0) * norm, (1.0 - std::numbers::sqrt2 * k + k2) * norm});
}

FirstOrderLowPass::FirstOrderLowPass(double cutoff_hz) {
  if (!(cutoff_hz > 0.0)) fail(ErrorCode::InvalidArgument, "cutoff must be positive");
  rc_ = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
}

double FirstOrderLowPass::step(double t, double x) noexcept {
  if (!primed_) {
    primed_ = true;
    y_ = x;
  } else {
    const double dt = std::max(t - last_t_, 0.0);
    y_ += dt / (rc_ + dt) * (x - y_);
  }
  last_t_ = t;
  return y_;
}

}  // namespace flp::pdr
