#include "flp/filter/epoch.hpp"

#include <algorithm>
#include <cmath>

namespace flp::filter {

using measurements::GnssFix;
using measurements::Measurement;
using measurements::RssObservation;

std::vector<Measurement> select_measurements(std::span<const Measurement> pending) {
  const GnssFix* gnss = nullptr;
  const RssObservation* rss = nullptr;
  for (const auto& m : pending) {
    if (const auto* g = std::get_if<GnssFix>(&m)) {
      if (!gnss || g->t >= gnss->t) gnss = g;
    } else {
      const auto& r = std::get<RssObservation>(m);
      if (!rss || r.rss > rss->rss) rss = &r;
    }
  }
  std::vector<Measurement> out;
  if (gnss) out.emplace_back(*gnss);
  if (rss) out.emplace_back(*rss);
  return out;
}

UpdateEpoch make_epoch(std::span<const pdr::StepEvent> steps, std::span<const Measurement> pending,
                       UpdateEpoch::Trigger trigger) {
  UpdateEpoch e;
  e.trigger = trigger;
  e.step_count = steps.size();
  // The steps collapse into their resultant so a turn inside the epoch keeps its geometry.
  double dx = 0.0, dy = 0.0;
  for (const auto& s : steps) {
    dx += s.length * std::cos(s.heading);
    dy += s.length * std::sin(s.heading);
    e.t = std::max(e.t, s.t);
  }
  if (!steps.empty()) {
    e.aggregated_length = std::hypot(dx, dy);
    e.aggregated_heading = e.aggregated_length > 0.0 ? std::atan2(dy, dx) : steps.back().heading;
  }
  for (const auto& m : pending) e.t = std::max(e.t, measurements::measurement_time(m));
  e.measurements = select_measurements(pending);
  return e;
}

std::optional<UpdateEpoch> epoch_trigger(std::span<const pdr::StepEvent> steps, std::span<const Measurement> pending,
                                         const FilterConfig& config) {
  if (steps.size() >= config.steps_per_epoch) return make_epoch(steps, pending, UpdateEpoch::Trigger::Step);
  const auto high = std::count_if(pending.begin(), pending.end(), [&](const Measurement& m) {
    const auto* r = std::get_if<RssObservation>(&m);
    return r && r->rss >= config.high_rss_threshold;
  });
  if (static_cast<std::size_t>(high) >= config.high_rss_count)
    return make_epoch(steps, pending, UpdateEpoch::Trigger::HighRss);
  return std::nullopt;
}

}  // namespace flp::filter
