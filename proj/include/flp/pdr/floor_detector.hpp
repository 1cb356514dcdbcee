#pragma once

#include <optional>
#include <vector>

#include "flp/pdr/altitude.hpp"
#include "flp/pdr/types.hpp"

namespace flp::pdr {

struct FloorDetectorConfig {
  double start_rate = 0.1;    // m/s, a climb starts above this
  double settle_rate = 0.05;  // m/s
  double settle_time = 3.0;   // s below settle_rate before deciding
  double rate_lag = 1.0;      // s, delay of the slope estimate behind the climb
};

/// Watches the altitude stream for climbs; once a climb settles and its
/// height exceeds half the smallest floor gap, picks the nearest floor.
class FloorChangeDetector {
 public:
  /// floor_heights must be strictly increasing. Throws InvalidArgument otherwise.
  FloorChangeDetector(std::vector<double> floor_heights, int current_floor, FloorDetectorConfig config = {});

  /// Throws UnknownFloor when the climb leaves the building's height span.
  std::optional<FloorEvent> push(const AltitudeSample& sample);

  int current_floor() const noexcept { return floor_; }
  void set_current_floor(int floor) noexcept { floor_ = floor; }
  bool climbing() const noexcept { return active_; }

 private:
  std::vector<double> heights_;
  FloorDetectorConfig config_;
  int floor_;
  double min_gap_;
  bool active_ = false;
  double start_altitude_ = 0.0;
  std::optional<double> quiet_since_;
};

/// Batch helper over an altitude stream.
std::vector<FloorEvent> detect_floor_change(const std::vector<AltitudeSample>& stream, int current_floor,
                                            const std::vector<double>& floor_heights,
                                            const FloorDetectorConfig& config = {});

}  // namespace flp::pdr
