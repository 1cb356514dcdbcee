#include <algorithm>
#include <cmath>

#include "flp/common/angles.hpp"
#include "flp/filter/ops.hpp"

namespace flp::filter {

namespace {

bool crosses_wall(const map::MapModel& map, int floor, Point2 a, Point2 b) {
  if (!map.has_floor(floor)) return true;
  const auto& f = map.floors[static_cast<std::size_t>(floor)];
  const map::Segment s{a, b};
  const map::AxisBox box = s.bbox();
  for (const auto& part : f.partitions) {
    if (!part.bounds.overlaps(box)) continue;
    for (const auto& w : part.walls)
      if (w.bbox.overlaps(box) && map::segment_intersect(s, w.seg)) return true;
  }
  return !map::try_locate(b, f);
}

}  // namespace

ResampleOutcome partial_resample(Cloud& cloud, const FilterConfig& config, const map::MapModel& map,
                                 const map::Beacon* anchor, int fallback_floor) {
  ResampleOutcome out;
  const double threshold = config.weight_threshold();
  const std::size_t n = cloud.size();
  const double w_new = 1.0 / static_cast<double>(n);

  std::vector<std::size_t> dead;
  std::vector<std::size_t> alive;
  std::vector<double> cdf;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.particles[i].weight < threshold) {
      dead.push_back(i);
    } else {
      alive.push_back(i);
      acc += cloud.particles[i].weight;
      cdf.push_back(acc);
    }
  }
  if (dead.empty()) return out;

  if (alive.empty() && !anchor) {
    reinit_global(cloud, fallback_floor, config, map);
    out.fallback_global = true;
    out.replaced = n;
    return out;
  }

  auto draw_survivor = [&]() -> const Particle* {
    if (alive.empty()) return nullptr;
    const double u = cloud.rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), alive.size() - 1);
    return &cloud.particles[alive[k]];
  };

  // Copies are taken from the survivors' current state before any replacement lands.
  std::vector<Particle> fresh;
  fresh.reserve(dead.size());
  for (std::size_t d = 0; d < dead.size(); ++d) {
    const Particle* src = draw_survivor();
    Particle q = src ? *src : cloud.particles[dead[d]];
    if (anchor) {
      const double r = config.beacon_resample_radius * std::sqrt(cloud.rng.uniform());
      const double phi = cloud.rng.uniform(0.0, kTwoPi);
      q.place({anchor->position.x + r * std::cos(phi), anchor->position.y + r * std::sin(phi)});
      q.floor = anchor->floor;
      if (!src) {
        q.beta = cloud.rng.uniform(0.0, kTwoPi);
        q.epsilon = std::clamp(cloud.rng.gaussian(config.init_epsilon_sigma), -0.5, 0.5);
      }
    } else {
      const Point2 origin = src->position();
      const Point2 moved{origin.x + cloud.rng.gaussian(config.resample_jitter),
                         origin.y + cloud.rng.gaussian(config.resample_jitter)};
      q.place(crosses_wall(map, q.floor, origin, moved) ? origin : moved);
    }
    q.weight = w_new;
    fresh.push_back(q);
  }
  for (std::size_t d = 0; d < dead.size(); ++d) cloud.particles[dead[d]] = fresh[d];
  out.replaced = dead.size();
  out.anchored = anchor != nullptr;
  normalize(cloud);
  return out;
}

}  // namespace flp::filter
