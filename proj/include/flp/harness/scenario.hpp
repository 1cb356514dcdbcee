#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "flp/filter/cloud.hpp"
#include "flp/filter/config.hpp"
#include "flp/harness/ground_truth.hpp"

namespace flp::harness {

struct DeviceChange {
  double t = 0.0;      // start of the manipulation
  double delta = 0.0;  // rad added to the misalignment angle
};

struct GnssWindow {
  double t0 = 0.0;
  double t1 = 0.0;
};

enum class PdrSource { Steps, Imu };

enum class PriorKind { KnownPose, KnownPosition, Global };

struct SensorNoise {
  double heading_per_step = 0.0;     // rad, random walk added to the step heading
  double step_length_fraction = 0.0; // relative std of the reported step length
  double gyro_bias = 0.0;            // rad/s, constant bias on the z gyro axis (IMU source)
  double gyro_noise = 0.002;         // rad/s
  double accel_noise = 0.02;         // m/s^2
  double pressure_noise = 0.003;     // hPa
  double pressure_drift = 0.0;       // hPa per hour
};

struct Scenario {
  std::string name;
  std::shared_ptr<const map::MapModel> map;
  std::vector<Waypoint> waypoints;
  double user_height = 1.75;
  double step_scale = 0.0;     // true epsilon of the walker
  double initial_ma = 0.0;     // rad
  std::vector<DeviceChange> device_schedule;
  double dpc_duration = 1.5;   // s the phone spends being moved
  double beacon_noise_sigma = 4.0;  // dBm
  double rss_rate = 1.0;            // Hz, one scan of every audible beacon
  double rss_sensitivity = -95.0;   // dBm
  bool cross_floor_leakage = false; // beacons on other floors are heard too
  std::vector<GnssWindow> gnss_windows;
  double gnss_sigma = 5.0;
  double gnss_rate = 1.0;
  std::uint32_t seed = 1;
  PriorKind prior = PriorKind::KnownPosition;
  double prior_sigma = 1.0;
  PdrSource pdr_source = PdrSource::Steps;
  double imu_rate = 100.0;
  double pressure_rate = 10.0;
  SensorNoise noise;
  nlohmann::json config_overrides = nlohmann::json::object();

  double duration() const { return waypoints.back().t - waypoints.front().t; }
};

/// Throws InvalidArgument for malformed schedules and InfeasibleScenario when
/// a leg crosses a wall or a floor change has no stairway on the way.
void validate_scenario(const Scenario& s);

/// JSON scenario. "map" is a path relative to base_dir or an inline map
/// object; preloaded, when given, replaces it.
Scenario parse_scenario(std::string_view text, const std::string& source_name, const std::string& base_dir,
                        std::shared_ptr<const map::MapModel> preloaded = nullptr);
Scenario load_scenario(const std::string& path, std::shared_ptr<const map::MapModel> preloaded = nullptr);
nlohmann::json scenario_to_json(const Scenario& s, const std::string& map_ref);

/// Engine prior implied by the scenario (position of the first waypoint).
filter::Prior make_prior(const Scenario& s);
/// Misalignment angle in the engine's frame at time t.
double truth_beta(const Scenario& s, double t);
/// User heading of the first leg.
double initial_user_heading(const Scenario& s);

/// Applies config_overrides on top of base.
filter::FilterConfig effective_config(const Scenario& s, const filter::FilterConfig& base);

}  // namespace flp::harness
