#pragma once

#include <string>
#include <variant>

#include "flp/map/map_model.hpp"

namespace flp::measurements {

using map::Point2;

struct RssModelParams {
  double slope_near = -0.94;     // dB/m
  double intercept_near = -54.0; // dBm
  double slope_far = -0.058;     // dB/m
  double intercept_far = -84.0;  // dBm
  double breakpoint = 35.0;      // m, belongs to the near branch
  double sigma = 10.0;           // dBm

  void validate() const;
};

constexpr double kDefaultGnssSigma = 5.0;  // m

struct GnssFix {
  double t = 0.0;
  Point2 position;
  double sigma = kDefaultGnssSigma;
};

struct RssObservation {
  double t = 0.0;
  std::string beacon_id;
  double rss = 0.0;  // dBm, in [-120, 0]
};

using Measurement = std::variant<GnssFix, RssObservation>;

inline double measurement_time(const Measurement& m) noexcept {
  return std::visit([](const auto& v) { return v.t; }, m);
}

/// Piecewise-linear path loss at distance d.
double rss_at_distance(double d, const RssModelParams& params) noexcept;
double rss_predict(Point2 x, const map::Beacon& beacon, const RssModelParams& params) noexcept;

/// Univariate normal density of the RSS residual.
double rss_likelihood(double rss, Point2 x, const map::Beacon& beacon, const RssModelParams& params) noexcept;
/// Resolves the beacon in the map; throws UnknownBeacon.
double rss_likelihood(const RssObservation& z, Point2 x, const map::MapModel& map, const RssModelParams& params);
/// log of the likelihood up to the normalising constant: -0.5 (r / sigma)^2.
double rss_log_factor(double rss, Point2 x, const map::Beacon& beacon, const RssModelParams& params) noexcept;

/// Isotropic bivariate normal density of the fix residual. Throws
/// InvalidArgument when sigma <= 0.
double gnss_likelihood(const GnssFix& z, Point2 x);
double gnss_log_factor(const GnssFix& z, Point2 x) noexcept;

}  // namespace flp::measurements
