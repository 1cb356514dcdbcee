#include <cmath>

#include "flp/common/error.hpp"
#include "flp/filter/ops.hpp"

namespace flp::filter {

std::vector<Point2> stairway_exits(const map::Floor& floor) {
  std::vector<Point2> out;
  for (const auto* z : floor.stairway_zones()) out.insert(out.end(), z->exit_points.begin(), z->exit_points.end());
  return out;
}

FloorChangeOutcome handle_floor_change(Cloud& cloud, int new_floor, const map::MapModel& map,
                                       const FilterConfig& config) {
  const map::Floor& target = map.floor(new_floor);
  FloorChangeOutcome out;
  const std::vector<Point2> exits = stairway_exits(target);
  if (exits.empty()) {
    reinit_global(cloud, new_floor, config, map);
    out.fallback_global = true;
    out.resampled = cloud.size();
    return out;
  }

  const double w = 1.0 / static_cast<double>(cloud.size());
  std::vector<double> cdf(exits.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto& p = cloud.particles[i];
    const bool on_stairs =
        map.has_floor(p.floor) && map.floors[static_cast<std::size_t>(p.floor)].zone_at(p.position(), map::ZoneKind::Stairway);
    if (on_stairs) {
      p.floor = new_floor;
      p.start = p.position();
      ++out.kept;
      continue;
    }
    // Distances are measured to the nearest exit first so the exponentials cannot all underflow.
    double dmin = INFINITY;
    for (const auto& e : exits) dmin = std::min(dmin, map::distance(p.position(), e));
    double acc = 0.0;
    for (std::size_t k = 0; k < exits.size(); ++k) {
      acc += std::exp(-(map::distance(p.position(), exits[k]) - dmin) / config.stairway_decay_lambda);
      cdf[k] = acc;
    }
    const double u = cloud.rng.uniform() * acc;
    std::size_t pick = 0;
    while (pick + 1 < exits.size() && u >= cdf[pick]) ++pick;
    const Point2 e = exits[pick];
    p.place({e.x + cloud.rng.gaussian(config.exit_sigma), e.y + cloud.rng.gaussian(config.exit_sigma)});
    p.floor = new_floor;
    p.weight = w;
    out.resampled_indices.push_back(i);
    out.exit_choice.push_back(pick);
    ++out.resampled;
  }
  if (!normalize(cloud))
    for (auto& p : cloud.particles) p.weight = w;
  return out;
}

}  // namespace flp::filter
