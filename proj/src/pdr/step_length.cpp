#include "flp/pdr/step_length.hpp"

#include <algorithm>

#include "flp/common/error.hpp"

namespace flp::pdr {

void StepModelParams::validate() const {
  if (!(user_height >= 1.0 && user_height <= 2.3))
    fail(ErrorCode::InvalidArgument, "user height must lie in [1.0, 2.3] m");
}

double step_length_raw(double frequency, const StepModelParams& params) noexcept {
  return params.a * frequency + params.b * params.user_height + params.c;
}

double step_length(double frequency, const StepModelParams& params) {
  if (!(frequency >= 0.5 && frequency <= 3.0)) fail(ErrorCode::InvalidArgument, "step frequency outside [0.5, 3] Hz");
  return std::clamp(step_length_raw(frequency, params), kMinStepLength, kMaxStepLength);
}

}  // namespace flp::pdr
