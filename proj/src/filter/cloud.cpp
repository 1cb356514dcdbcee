#include "flp/filter/cloud.hpp"

#include <algorithm>
#include <cmath>

#include "flp/common/angles.hpp"
#include "flp/common/error.hpp"

namespace flp::filter {

namespace {

bool clear_of_walls(Point2 p, const map::Partition& part, double clearance) {
  for (const auto& w : part.walls)
    if (w.bbox.inflated(clearance).contains(p) && map::point_segment_distance(p, w.seg) < clearance) return false;
  return true;
}

Point2 sample_global(const map::Floor& floor, const FilterConfig& config, Lcg& rng) {
  double total = 0.0;
  for (const auto& p : floor.partitions) total += p.bounds.area();
  if (!(total > 0.0)) fail(ErrorCode::InvalidMap, "floor " + std::to_string(floor.index) + " has no area");
  // Partition bounds carry a margin around the building; spawns stay inside the walls' extent.
  map::AxisBox extent = map::AxisBox::empty();
  for (const auto& p : floor.partitions)
    for (const auto& w : p.walls) extent.expand(w.bbox);
  if (extent.is_empty()) extent = floor.bounds();
  Point2 candidate;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double pick = rng.uniform() * total;
    const map::Partition* part = &floor.partitions.back();
    for (const auto& p : floor.partitions) {
      pick -= p.bounds.area();
      if (pick < 0.0) {
        part = &p;
        break;
      }
    }
    candidate = {rng.uniform(part->bounds.min.x, part->bounds.max.x), rng.uniform(part->bounds.min.y, part->bounds.max.y)};
    if (extent.contains(candidate) && clear_of_walls(candidate, *part, config.spawn_clearance)) return candidate;
  }
  return candidate;
}

}  // namespace

void reinit_global(Cloud& cloud, int floor_index, const FilterConfig& config, const map::MapModel& map) {
  const map::Floor& floor = map.floor(floor_index);
  const double w = 1.0 / static_cast<double>(cloud.particles.size());
  for (auto& p : cloud.particles) {
    p.place(sample_global(floor, config, cloud.rng));
    p.floor = floor_index;
    p.beta = cloud.rng.uniform(0.0, kTwoPi);
    p.epsilon = std::clamp(cloud.rng.gaussian(config.init_epsilon_sigma), -0.5, 0.5);
    p.weight = w;
  }
}

Cloud init_cloud(const Prior& prior, const FilterConfig& config, const map::MapModel& map, std::uint32_t seed) {
  config.validate();
  Cloud cloud;
  cloud.rng = Lcg(seed);
  cloud.particles.resize(config.n_particles);
  const double w = 1.0 / static_cast<double>(config.n_particles);

  if (const auto* g = std::get_if<Global>(&prior)) {
    reinit_global(cloud, g->floor, config, map);
    return cloud;
  }

  auto check_inside = [&](Point2 p, int floor) {
    if (!map::try_locate(p, map.floor(floor)))
      fail(ErrorCode::OutOfMap, "prior position lies outside floor " + std::to_string(floor));
  };

  if (const auto* kp = std::get_if<KnownPose>(&prior)) {
    check_inside(kp->position, kp->floor);
    for (auto& p : cloud.particles) {
      p.place({kp->position.x + cloud.rng.gaussian(kp->sigma), kp->position.y + cloud.rng.gaussian(kp->sigma)});
      p.floor = kp->floor;
      p.beta = wrap_two_pi(kp->beta + cloud.rng.gaussian(kp->beta_sigma));
      p.epsilon = std::clamp(kp->epsilon, -0.5, 0.5);
      p.weight = w;
    }
    return cloud;
  }

  const auto& kpos = std::get<KnownPosition>(prior);
  check_inside(kpos.position, kpos.floor);
  for (auto& p : cloud.particles) {
    p.place({kpos.position.x + cloud.rng.gaussian(kpos.sigma), kpos.position.y + cloud.rng.gaussian(kpos.sigma)});
    p.floor = kpos.floor;
    p.beta = cloud.rng.uniform(0.0, kTwoPi);
    p.epsilon = std::clamp(cloud.rng.gaussian(config.init_epsilon_sigma), -0.5, 0.5);
    p.weight = w;
  }
  return cloud;
}

double weight_sum(const Cloud& cloud) noexcept {
  double s = 0.0;
  for (const auto& p : cloud.particles) s += p.weight;
  return s;
}

bool normalize(Cloud& cloud) noexcept {
  const double s = weight_sum(cloud);
  if (!(s > 0.0)) return false;
  const double inv = 1.0 / s;
  for (auto& p : cloud.particles) p.weight *= inv;
  return true;
}

}  // namespace flp::filter
