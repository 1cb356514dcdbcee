#include "flp/pdr/step_detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flp/common/error.hpp"

namespace flp::pdr {

StepDetector::StepDetector(double fs, StepDetectorConfig config)
    : config_(config),
      hp_(Biquad::butterworth_highpass(config.low_cut_hz, fs)),
      lp_(Biquad::butterworth_lowpass(config.high_cut_hz, fs)),
      last_frequency_(config.default_frequency) {}

bool StepDetector::regular() const {
  if (static_cast<int>(intervals_.size()) < config_.regularity_intervals) return false;
  const double n = static_cast<double>(intervals_.size());
  const double mean = std::accumulate(intervals_.begin(), intervals_.end(), 0.0) / n;
  double var = 0.0;
  for (double v : intervals_) var += (v - mean) * (v - mean);
  return std::sqrt(var / n) / mean < config_.regularity_cv;
}

std::optional<DetectedStep> StepDetector::push(double t, const Eigen::Vector3d& accel) {
  // Removing gravity first keeps the zero-initialised high-pass from ringing.
  const double y = lp_.step(hp_.step(accel.norm() - kGravity));
  std::optional<DetectedStep> out;
  if (samples_ >= 2 && y1_ > y2_ && y1_ >= y && y1_ >= config_.min_peak) {
    const double tp = t1_;
    if (!last_peak_ || tp - *last_peak_ >= config_.min_spacing) {
      double freq = last_frequency_;
      if (last_peak_) {
        const double interval = tp - *last_peak_;
        if (interval <= 1.0 / 0.5) {
          freq = std::clamp(1.0 / interval, 0.5, 3.0);
          intervals_.push_back(interval);
          if (static_cast<int>(intervals_.size()) > config_.regularity_intervals) intervals_.pop_front();
        } else {
          intervals_.clear();  // a new walking bout
        }
      }
      last_frequency_ = freq;
      last_peak_ = tp;
      if (dpc_ == DpcFlag::Stable || regular()) out = DetectedStep{tp, freq};
    }
  }
  y2_ = y1_;
  y1_ = y;
  t1_ = t;
  ++samples_;
  return out;
}

std::vector<DetectedStep> detect_steps(std::span<const ImuSample> stream, double fs,
                                       std::span<const DpcFlagEvent> dpc_flags,
                                       const StepDetectorConfig& config) {
  if (fs < 20.0) fail(ErrorCode::InvalidArgument, "step detection needs fs >= 20 Hz");
  if (stream.empty() || stream.back().t - stream.front().t < 3.0)
    fail(ErrorCode::StreamTooShort, "step detection needs at least 3 s of samples");
  StepDetector det(fs, config);
  std::vector<DetectedStep> out;
  std::size_t next_flag = 0;
  DpcFlag flag = DpcFlag::Stable;
  // Flags are applied by peak time, which trails the sample by one period.
  const double dt = 1.0 / fs;
  for (const auto& s : stream) {
    while (next_flag < dpc_flags.size() && dpc_flags[next_flag].t <= s.t - dt) flag = dpc_flags[next_flag++].flag;
    det.set_dpc(flag);
    if (auto step = det.push(s.t, s.accel)) out.push_back(*step);
  }
  return out;
}

}  // namespace flp::pdr
