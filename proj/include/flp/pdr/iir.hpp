#pragma once

#include <array>

namespace flp::pdr {

/// Second-order IIR section in transposed direct form II. State starts at zero.
class Biquad {
 public:
  Biquad() = default;
  Biquad(std::array<double, 3> b, std::array<double, 2> a) : b_(b), a_(a) {}

  /// Butterworth (Q = 1/sqrt(2)) designs via the bilinear transform with
  /// frequency prewarping; identical to scipy.signal.butter(2, ...).
  static Biquad butterworth_lowpass(double cutoff_hz, double fs);
  static Biquad butterworth_highpass(double cutoff_hz, double fs);

  double step(double x) noexcept {
    const double y = b_[0] * x + s1_;
    s1_ = b_[1] * x - a_[0] * y + s2_;
    s2_ = b_[2] * x - a_[1] * y;
    return y;
  }
  void reset() noexcept { s1_ = s2_ = 0.0; }

  const std::array<double, 3>& b() const noexcept { return b_; }
  const std::array<double, 2>& a() const noexcept { return a_; }  // a1, a2 (a0 = 1)

 private:
  std::array<double, 3> b_{1.0, 0.0, 0.0};
  std::array<double, 2> a_{0.0, 0.0};
  double s1_ = 0.0;
  double s2_ = 0.0;
};

/// First-order low-pass for irregularly sampled input; seeded with the first sample.
class FirstOrderLowPass {
 public:
  explicit FirstOrderLowPass(double cutoff_hz);
  double step(double t, double x) noexcept;
  bool primed() const noexcept { return primed_; }
  double value() const noexcept { return y_; }

 private:
  double rc_;
  double y_ = 0.0;
  double last_t_ = 0.0;
  bool primed_ = false;
};

}  // namespace flp::pdr
