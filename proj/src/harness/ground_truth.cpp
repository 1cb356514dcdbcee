#include "flp/harness/ground_truth.hpp"

#include <algorithm>
#include <cmath>

#include "flp/common/error.hpp"

namespace flp::harness {

void check_waypoints(std::span<const Waypoint> waypoints) {
  if (waypoints.size() < 2) fail(ErrorCode::InvalidArgument, "ground truth needs at least two waypoints");
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    if (!(waypoints[i].t > waypoints[i - 1].t))
      fail(ErrorCode::InvalidArgument, "waypoint times must be strictly increasing (index " + std::to_string(i) + ")");
}

namespace {

bool in_stairway(const map::MapModel& map, int floor, Point2 p) {
  return map.has_floor(floor) && map.floor(floor).zone_at(p, map::ZoneKind::Stairway) != nullptr;
}

}  // namespace

TruthSample truth_at(std::span<const Waypoint> wps, double t, const map::MapModel* map) {
  if (t <= wps.front().t) return {t, wps.front().position, wps.front().floor};
  if (t >= wps.back().t) return {t, wps.back().position, wps.back().floor};
  const auto it = std::upper_bound(wps.begin(), wps.end(), t, [](double v, const Waypoint& w) { return v < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *std::prev(it);
  const double f = (t - a.t) / (b.t - a.t);
  const Point2 p = a.position + (b.position - a.position) * f;
  int floor = a.floor;
  if (a.floor != b.floor) {
    // Destination floor from the first point of the leg inside a stairway,
    // or from the midpoint when the leg never enters one.
    double entry = 0.5;
    if (map) {
      constexpr int kProbe = 200;
      for (int k = 0; k <= kProbe; ++k) {
        const double g = static_cast<double>(k) / kProbe;
        const Point2 q = a.position + (b.position - a.position) * g;
        if (in_stairway(*map, a.floor, q) || in_stairway(*map, b.floor, q)) {
          entry = g;
          break;
        }
      }
    }
    floor = f >= entry ? b.floor : a.floor;
  }
  return {t, p, floor};
}

GroundTruth interpolate_ground_truth(std::span<const Waypoint> waypoints, double rate_hz, const map::MapModel* map) {
  check_waypoints(waypoints);
  if (!(rate_hz > 0.0)) fail(ErrorCode::InvalidArgument, "ground truth rate must be positive");
  const double t0 = waypoints.front().t;
  const double t1 = waypoints.back().t;
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) * rate_hz + 1e-9));
  GroundTruth out;
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out.push_back(truth_at(waypoints, t0 + static_cast<double>(k) / rate_hz, map));
  return out;
}

}  // namespace flp::harness
