#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "flp/pdr/altitude.hpp"
#include "flp/pdr/dpc_detector.hpp"
#include "flp/pdr/floor_detector.hpp"
#include "flp/pdr/orientation.hpp"
#include "flp/pdr/step_detector.hpp"
#include "flp/pdr/step_length.hpp"

namespace flp::pdr {

struct PdrConfig {
  double fs = 100.0;
  StepModelParams step_model;
  StepDetectorConfig steps;
  OrientationConfig orientation;
  DpcConfig dpc;
  AltitudeConfig altitude;
  FloorDetectorConfig floors;
  double bias_window = 1.0;    // s of samples checked for a static phase
  double heading_lookback = 1.0;  // s before a DPC trigger whose heading is reported
};

/// Turns a raw IMU (+ pressure) stream into step, DPC and floor events.
class PdrPipeline {
 public:
  /// floor_heights may be empty to disable floor detection.
  PdrPipeline(PdrConfig config, std::vector<double> floor_heights, int initial_floor);

  /// Consumes one sample and appends any resulting events to out.
  void push(const ImuSample& sample, std::vector<PdrEvent>& out);

  const OrientationState& orientation() const noexcept { return orientation_; }
  const DpcState& dpc() const noexcept { return dpc_.state(); }
  std::optional<AltitudeSample> last_altitude() const noexcept { return last_altitude_; }
  /// Device heading at time t from the recent history (oldest entry if t is older).
  double heading_at(double t) const noexcept;

 private:
  void update_bias();

  PdrConfig config_;
  OrientationState orientation_;
  StepDetector steps_;
  DpcDetector dpc_;
  AltitudeFilter altitude_;
  std::optional<FloorChangeDetector> floors_;
  std::optional<AltitudeSample> last_altitude_;
  std::deque<ImuSample> window_;
  std::deque<std::pair<double, double>> headings_;
  std::optional<double> last_t_;
  int since_bias_check_ = 0;
};

}  // namespace flp::pdr
