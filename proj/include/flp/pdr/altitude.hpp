#pragma once

#include <deque>
#include <span>
#include <vector>

#include "flp/pdr/iir.hpp"

namespace flp::pdr {

/// ISA barometric altitude with p0 = 1013.25 hPa.
double pressure_to_altitude(double pressure_hpa) noexcept;

struct AltitudeConfig {
  double lowpass_hz = 0.2;
  double drift_time_constant = 60.0;  // s, baseline that absorbs weather drift
  double slope_window = 1.0;          // s
  double freeze_rate = 0.05;          // m/s, baseline holds while climbing faster
};

struct AltitudeSample {
  double t = 0.0;
  double altitude = 0.0;   // m, low-passed absolute altitude
  double variation = 0.0;  // m, altitude above the drift baseline
  double rate = 0.0;       // m/s, slope of altitude over slope_window
};

/// Pressure -> altitude -> low-pass; a slow baseline removes drift. The
/// baseline is held while the altitude changes quickly, so a climb shows up
/// at full height in variation instead of being differentiated away.
class AltitudeFilter {
 public:
  explicit AltitudeFilter(AltitudeConfig config = {});
  AltitudeSample push(double t, double pressure_hpa);

 private:
  AltitudeConfig config_;
  FirstOrderLowPass lpf_;
  double baseline_ = 0.0;
  double last_t_ = 0.0;
  bool primed_ = false;
  std::deque<std::pair<double, double>> history_;
};

/// Batch form; samples are (t, hPa). Throws InvalidArgument if fs < 1 Hz.
std::vector<AltitudeSample> update_altitude(std::span<const std::pair<double, double>> pressure, double fs,
                                            const AltitudeConfig& config = {});

}  // namespace flp::pdr
