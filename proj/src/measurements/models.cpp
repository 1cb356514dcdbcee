#include "flp/measurements/models.hpp"

#include <cmath>
#include <numbers>

#include "flp/common/error.hpp"

namespace flp::measurements {

void RssModelParams::validate() const {
  if (!(breakpoint > 0.0)) fail(ErrorCode::InvalidArgument, "RSS breakpoint must be positive");
  if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "RSS sigma must be positive");
}

double rss_at_distance(double d, const RssModelParams& p) noexcept {
  return d <= p.breakpoint ? p.slope_near * d + p.intercept_near : p.slope_far * d + p.intercept_far;
}

double rss_predict(Point2 x, const map::Beacon& beacon, const RssModelParams& params) noexcept {
  return rss_at_distance(map::distance(x, beacon.position), params);
}

double rss_log_factor(double rss, Point2 x, const map::Beacon& beacon, const RssModelParams& params) noexcept {
  const double r = (rss - rss_predict(x, beacon, params)) / params.sigma;
  return -0.5 * r * r;
}

double rss_likelihood(double rss, Point2 x, const map::Beacon& beacon, const RssModelParams& params) noexcept {
  return std::exp(rss_log_factor(rss, x, beacon, params)) /
         (params.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double rss_likelihood(const RssObservation& z, Point2 x, const map::MapModel& map, const RssModelParams& params) {
  const map::Beacon* b = map.find_beacon(z.beacon_id);
  if (!b) fail(ErrorCode::UnknownBeacon, "beacon '" + z.beacon_id + "' is not in the map");
  return rss_likelihood(z.rss, x, *b, params);
}

double gnss_log_factor(const GnssFix& z, Point2 x) noexcept {
  return -0.5 * (z.position - x).squared_norm() / (z.sigma * z.sigma);
}

double gnss_likelihood(const GnssFix& z, Point2 x) {
  if (!(z.sigma > 0.0)) fail(ErrorCode::InvalidArgument, "GNSS sigma must be positive");
  return std::exp(gnss_log_factor(z, x)) / (2.0 * std::numbers::pi * z.sigma * z.sigma);
}

}  // namespace flp::measurements
