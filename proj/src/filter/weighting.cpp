#include <cmath>
#include <limits>

#include "flp/common/error.hpp"
#include "flp/filter/ops.hpp"

namespace flp::filter {

using measurements::GnssFix;
using measurements::RssObservation;

MeasurementOutcome measurement_update(Cloud& cloud, std::span<const measurements::Measurement> ms,
                                      const map::MapModel& map, const FilterConfig& config) {
  MeasurementOutcome out;
  const GnssFix* gnss = nullptr;
  for (const auto& m : ms) {
    if (const auto* g = std::get_if<GnssFix>(&m)) {
      if (!gnss || g->t >= gnss->t) gnss = g;
    } else {
      const auto& r = std::get<RssObservation>(m);
      if (!out.rss || r.rss > out.rss->rss) out.rss = r;
    }
  }
  if (out.rss) {
    out.beacon = map.find_beacon(out.rss->beacon_id);
    if (!out.beacon) fail(ErrorCode::UnknownBeacon, "beacon '" + out.rss->beacon_id + "' is not in the map");
    out.high_rss = out.rss->rss >= config.high_rss_threshold;
  }
  if (gnss && !(gnss->sigma > 0.0)) fail(ErrorCode::InvalidArgument, "GNSS sigma must be positive");
  out.gnss_used = gnss != nullptr;

  const bool zones_matter = gnss || config.accessibility;
  if (!gnss && !out.rss && !config.accessibility) return out;

  // Log-domain update with max subtraction keeps far-off particles from underflowing as a group.
  std::vector<double> lw(cloud.size());
  double max_lw = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.particles[i];
    if (!(p.weight > 0.0)) {
      lw[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double l = std::log(p.weight);
    const map::Floor* floor = zones_matter && map.has_floor(p.floor) ? &map.floors[static_cast<std::size_t>(p.floor)] : nullptr;
    if (gnss && !(floor && floor->zone_at(p.position(), map::ZoneKind::GnssDenied)))
      l += measurements::gnss_log_factor(*gnss, p.position());
    if (out.rss) l += measurements::rss_log_factor(out.rss->rss, p.position(), *out.beacon, config.rss);
    if (config.accessibility && floor)
      if (const auto* z = floor->zone_at(p.position(), map::ZoneKind::HighAccessibility))
        l += z->weight_factor > 0.0 ? std::log(z->weight_factor) : -std::numeric_limits<double>::infinity();
    lw[i] = l;
    max_lw = std::max(max_lw, l);
  }
  if (!std::isfinite(max_lw)) {
    for (auto& p : cloud.particles) p.weight = 0.0;
    return out;
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) cloud.particles[i].weight = std::exp(lw[i] - max_lw);
  normalize(cloud);
  return out;
}

}  // namespace flp::filter
