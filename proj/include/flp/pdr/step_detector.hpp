#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "flp/pdr/iir.hpp"
#include "flp/pdr/types.hpp"

namespace flp::pdr {

struct StepDetectorConfig {
  double low_cut_hz = 1.0;
  double high_cut_hz = 2.0;
  double min_peak = 0.5;          // m/s^2 on the band-passed signal
  double min_spacing = 0.33;      // s
  double default_frequency = 1.75;  // Hz, used for the first step of a walking bout
  double regularity_cv = 0.15;    // steps survive a DPC when the last intervals are this regular
  int regularity_intervals = 4;
};

struct DetectedStep {
  double t = 0.0;
  double frequency = 0.0;
};

/// Streaming step detector on the accelerometer norm: band-pass, then
/// local-maximum picking. Orientation-invariant by construction.
class StepDetector {
 public:
  StepDetector(double fs, StepDetectorConfig config = {});

  /// Returns the step whose peak was confirmed by this sample, if any.
  std::optional<DetectedStep> push(double t, const Eigen::Vector3d& accel);

  void set_dpc(DpcFlag flag) noexcept { dpc_ = flag; }
  double last_filtered() const noexcept { return y1_; }

 private:
  bool regular() const;

  StepDetectorConfig config_;
  Biquad hp_;
  Biquad lp_;
  DpcFlag dpc_ = DpcFlag::Stable;
  int samples_ = 0;
  double t1_ = 0.0;  // time of the previous sample
  double y1_ = 0.0;  // previous filtered value
  double y2_ = 0.0;  // value before that
  std::optional<double> last_peak_;
  double last_frequency_;
  std::deque<double> intervals_;
};

/// Batch form. dpc_flags are flag transitions ordered by time.
/// Throws StreamTooShort for streams under 3 s, InvalidArgument if fs < 20 Hz.
std::vector<DetectedStep> detect_steps(std::span<const ImuSample> stream, double fs,
                                       std::span<const DpcFlagEvent> dpc_flags = {},
                                       const StepDetectorConfig& config = {});

}  // namespace flp::pdr
