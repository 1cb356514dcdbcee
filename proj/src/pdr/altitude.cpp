#include "flp/pdr/altitude.hpp"

#include <cmath>

#include "flp/common/error.hpp"

namespace flp::pdr {

double pressure_to_altitude(double pressure_hpa) noexcept {
  return 44330.0 * (1.0 - std::pow(pressure_hpa / 1013.25, 0.1903));
}

AltitudeFilter::AltitudeFilter(AltitudeConfig config) : config_(config), lpf_(config.lowpass_hz) {}

AltitudeSample AltitudeFilter::push(double t, double pressure_hpa) {
  const double alt = lpf_.step(t, pressure_to_altitude(pressure_hpa));
  history_.emplace_back(t, alt);
  while (history_.size() > 2 && history_[1].first <= t - config_.slope_window) history_.pop_front();

  double rate = 0.0;
  const double span = t - history_.front().first;
  if (span > 0.0) rate = (alt - history_.front().second) / span;

  if (!primed_) {
    primed_ = true;
    baseline_ = alt;
  } else if (std::abs(rate) <= config_.freeze_rate) {
    const double dt = t - last_t_;
    baseline_ += dt / (config_.drift_time_constant + dt) * (alt - baseline_);
  }
  last_t_ = t;
  return {t, alt, alt - baseline_, rate};
}

std::vector<AltitudeSample> update_altitude(std::span<const std::pair<double, double>> pressure, double fs,
                                            const AltitudeConfig& config) {
  if (fs < 1.0) fail(ErrorCode::InvalidArgument, "altitude filtering needs fs >= 1 Hz");
  AltitudeFilter filter(config);
  std::vector<AltitudeSample> out;
  out.reserve(pressure.size());
  for (const auto& [t, p] : pressure) out.push_back(filter.push(t, p));
  return out;
}

}  // namespace flp::pdr
