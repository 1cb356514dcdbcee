#pragma once

namespace flp::pdr {

struct StepModelParams {
  double a = 0.339;   // m*s
  double b = 0.585;
  double c = -0.923;  // m
  double user_height = 1.75;  // m, within [1.0, 2.3]

  void validate() const;
};

constexpr double kMinStepLength = 0.3;
constexpr double kMaxStepLength = 1.2;

/// L = a*F + b*H + c, clamped to [0.3, 1.2] m. Throws InvalidArgument for F
/// outside [0.5, 3] Hz.
double step_length(double frequency, const StepModelParams& params);

/// Unclamped model value.
double step_length_raw(double frequency, const StepModelParams& params) noexcept;

}  // namespace flp::pdr
