#pragma once

#include <random>
#include <vector>

#include "flp/harness/scenario.hpp"
#include "flp/measurements/models.hpp"
#include "flp/pdr/types.hpp"

namespace flp::harness {

struct SensorTraces {
  GroundTruth truth;                              // 10 Hz
  std::vector<pdr::StepEvent> steps;              // step source only
  std::vector<Point2> step_positions;             // true position at every step
  std::vector<pdr::DpcFlagEvent> dpc;             // step source only
  std::vector<pdr::FloorEvent> floors;            // step source only, from the synthetic barometer
  std::vector<pdr::ImuSample> imu;                // IMU source only, pressure attached at pressure_rate
  std::vector<std::pair<double, double>> pressure;  // (t, hPa)
  std::vector<measurements::Measurement> measurements;  // time ordered
};

/// Cadence at which a walker of the given height and step scale reaches
/// speed: solves (1 + s) * (a F + b H + c) * F = v. Throws InfeasibleScenario
/// when the speed exceeds 2.5 m/s or the cadence leaves [0.5, 3] Hz.
double solve_cadence(double speed, double user_height, double step_scale);

/// Pressure at an altitude under the ISA formula used by the altitude filter.
double altitude_to_pressure(double altitude_m) noexcept;

/// Generates every sensor stream of the scenario. Deterministic in the seed.
SensorTraces synthesize_sensors(const Scenario& scenario);

/// Normal draws with a fixed algorithm so traces do not depend on the
/// standard library's distribution implementation.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed, std::uint64_t stream);
  double uniform() noexcept;  // [0, 1)
  double gaussian(double sigma) noexcept;

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace flp::harness
