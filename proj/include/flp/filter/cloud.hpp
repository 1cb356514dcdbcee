#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "flp/common/lcg.hpp"
#include "flp/filter/config.hpp"
#include "flp/map/map_model.hpp"

namespace flp::filter {

using map::Point2;

struct Particle {
  double x = 0.0;
  double y = 0.0;
  double epsilon = 0.0;  // step-length scale mismatch
  double beta = 0.0;     // misalignment angle, [0, 2*pi)
  int floor = 0;
  double weight = 0.0;
  Point2 start;          // position before the last displacement

  Point2 position() const noexcept { return {x, y}; }
  void place(Point2 p) noexcept {
    x = p.x;
    y = p.y;
    start = p;
  }
};

struct Cloud {
  std::vector<Particle> particles;
  Lcg rng;
  std::uint64_t epoch = 0;

  std::size_t size() const noexcept { return particles.size(); }
};

/// Position, heading offset and step scale known (sigma = 0 gives identical particles).
struct KnownPose {
  Point2 position;
  int floor = 0;
  double beta = 0.0;
  double sigma = 0.0;        // m
  double beta_sigma = 0.0;   // rad
  double epsilon = 0.0;
};

/// Position known, misalignment unknown (uniform).
struct KnownPosition {
  Point2 position;
  int floor = 0;
  double sigma = 1.0;  // m
};

/// Nothing known beyond the floor.
struct Global {
  int floor = 0;
};

using Prior = std::variant<KnownPose, KnownPosition, Global>;

/// Samples the initial cloud. Throws OutOfMap when the prior lies outside
/// the floor, UnknownFloor when the floor does not exist.
Cloud init_cloud(const Prior& prior, const FilterConfig& config, const map::MapModel& map, std::uint32_t seed);

/// Resamples every particle from the global prior on floor, reusing the cloud's generator.
void reinit_global(Cloud& cloud, int floor, const FilterConfig& config, const map::MapModel& map);

double weight_sum(const Cloud& cloud) noexcept;

/// Scales weights to sum to 1. Returns false (weights untouched) if the sum is 0.
bool normalize(Cloud& cloud) noexcept;

}  // namespace flp::filter
