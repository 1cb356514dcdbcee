#include <algorithm>
#include <cmath>
#include <numeric>

#include "flp/common/angles.hpp"
#include "flp/filter/ops.hpp"

namespace flp::filter {

namespace {

void move(Particle& p, const UpdateEpoch& epoch, const NoiseConfig& noise, const map::MapModel& map, Lcg& rng) {
  const double n_d = rng.gaussian(noise.sigma_d);
  const double n_a = rng.gaussian(noise.sigma_alpha);
  const double n_e = rng.gaussian(noise.sigma_epsilon);
  const double n_b = rng.gaussian(noise.sigma_beta);

  double length = epoch.aggregated_length;
  if (map.has_floor(p.floor))
    if (const auto* stair = map.floors[static_cast<std::size_t>(p.floor)].zone_at(p.position(), map::ZoneKind::Stairway))
      length = static_cast<double>(epoch.step_count) * stair->stairway_step_length;

  const double d = (1.0 + p.epsilon) * (length + n_d);
  const double heading = epoch.aggregated_heading + n_a + p.beta;
  p.start = p.position();
  p.x += d * std::cos(heading);
  p.y += d * std::sin(heading);
  p.epsilon = std::clamp(p.epsilon + n_e, -0.5, 0.5);
  p.beta = wrap_two_pi(p.beta + n_b);
}

}  // namespace

void predict(Cloud& cloud, const UpdateEpoch& epoch, const NoiseConfig& noise, const map::MapModel& map) {
  if (epoch.step_count == 0) {
    for (auto& p : cloud.particles) p.start = p.position();
    return;
  }
  for (auto& p : cloud.particles) move(p, epoch, noise, map, cloud.rng);
}

void predict(Cloud& cloud, const UpdateEpoch& epoch, const NoiseConfig& noise, const map::MapModel& map,
             std::span<const std::size_t> indices) {
  for (auto i : indices) {
    auto& p = cloud.particles[i];
    if (epoch.step_count == 0)
      p.start = p.position();
    else
      move(p, epoch, noise, map, cloud.rng);
  }
}

void apply_dpc(Cloud& cloud, double heading_before, double heading_after, double uniform_fraction) {
  const std::size_t n = cloud.size();
  const auto k = static_cast<std::size_t>(std::llround(std::clamp(uniform_fraction, 0.0, 1.0) * static_cast<double>(n)));
  // Partial Fisher-Yates: the first k entries form a uniform random subset.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + cloud.rng.index(n - i)]);
  std::vector<bool> redraw(n, false);
  for (std::size_t i = 0; i < k; ++i) redraw[order[i]] = true;

  const double shift = heading_before - heading_after;
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = cloud.particles[i];
    p.beta = redraw[i] ? cloud.rng.uniform(0.0, kTwoPi) : wrap_two_pi(p.beta + shift);
  }
}

}  // namespace flp::filter
