#pragma once

#include <span>
#include <vector>

#include "flp/map/map_model.hpp"

namespace flp::harness {

using map::Point2;

struct Waypoint {
  double t = 0.0;
  Point2 position;
  int floor = 0;
};

struct TruthSample {
  double t = 0.0;
  Point2 position;
  int floor = 0;
};

using GroundTruth = std::vector<TruthSample>;

/// Position at time t by linear interpolation between landmarks (clamped to
/// the ends). On a leg between floors the destination floor applies once
/// the position is inside a stairway zone of either floor, or from the leg's
/// midpoint when the map has no such zone along the leg.
TruthSample truth_at(std::span<const Waypoint> waypoints, double t, const map::MapModel* map = nullptr);

/// Samples truth_at on a regular grid from the first to the last waypoint.
/// Throws InvalidArgument for fewer than two waypoints or non-increasing times.
GroundTruth interpolate_ground_truth(std::span<const Waypoint> waypoints, double rate_hz = 10.0,
                                     const map::MapModel* map = nullptr);

void check_waypoints(std::span<const Waypoint> waypoints);

}  // namespace flp::harness
