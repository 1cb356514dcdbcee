#include "flp/pdr/floor_detector.hpp"

#include <cmath>
#include <limits>

#include "flp/common/error.hpp"

namespace flp::pdr {

FloorChangeDetector::FloorChangeDetector(std::vector<double> floor_heights, int current_floor,
                                         FloorDetectorConfig config)
    : heights_(std::move(floor_heights)), config_(config), floor_(current_floor) {
  if (heights_.empty()) fail(ErrorCode::InvalidArgument, "floor heights must not be empty");
  if (current_floor < 0 || current_floor >= static_cast<int>(heights_.size()))
    fail(ErrorCode::UnknownFloor, "current floor " + std::to_string(current_floor) + " is not in the map");
  min_gap_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < heights_.size(); ++i) {
    const double gap = heights_[i] - heights_[i - 1];
    if (!(gap > 0.0)) fail(ErrorCode::InvalidArgument, "floor heights must be strictly increasing");
    min_gap_ = std::min(min_gap_, gap);
  }
}

std::optional<FloorEvent> FloorChangeDetector::push(const AltitudeSample& s) {
  if (heights_.size() < 2) return std::nullopt;
  if (!active_) {
    if (std::abs(s.rate) > config_.start_rate) {
      active_ = true;
      start_altitude_ = s.altitude - s.rate;  // altitude one slope window ago
      quiet_since_.reset();
    }
    return std::nullopt;
  }
  if (std::abs(s.rate) >= config_.settle_rate) {
    quiet_since_.reset();
    return std::nullopt;
  }
  if (!quiet_since_) quiet_since_ = s.t;
  if (s.t - *quiet_since_ < config_.settle_time) return std::nullopt;

  active_ = false;
  const double delta = s.altitude - start_altitude_;
  if (std::abs(delta) < min_gap_ / 2.0) return std::nullopt;

  const double target = heights_[static_cast<std::size_t>(floor_)] + delta;
  const double lo = heights_.front() - min_gap_ / 2.0;
  const double hi = heights_.back() + min_gap_ / 2.0;
  if (target < lo || target > hi)
    fail(ErrorCode::UnknownFloor, "altitude change of " + std::to_string(delta) + " m leaves the building");
  int best = 0;
  for (std::size_t i = 1; i < heights_.size(); ++i)
    if (std::abs(heights_[i] - target) < std::abs(heights_[static_cast<std::size_t>(best)] - target))
      best = static_cast<int>(i);
  if (best == floor_) return std::nullopt;
  floor_ = best;
  return FloorEvent{s.t, delta, best, s.t - *quiet_since_ + config_.rate_lag};
}

std::vector<FloorEvent> detect_floor_change(const std::vector<AltitudeSample>& stream, int current_floor,
                                            const std::vector<double>& floor_heights,
                                            const FloorDetectorConfig& config) {
  FloorChangeDetector det(floor_heights, current_floor, config);
  std::vector<FloorEvent> out;
  for (const auto& s : stream)
    if (auto e = det.push(s)) out.push_back(*e);
  return out;
}

}  // namespace flp::pdr
