#pragma once

#include <optional>
#include <variant>

#include <Eigen/Core>

namespace flp::pdr {

struct ImuSample {
  double t = 0.0;                                  // s
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // m/s^2, body frame
  Eigen::Vector3d gyro = Eigen::Vector3d::Zero();   // rad/s, body frame
  std::optional<double> pressure;                  // hPa
};

struct StepEvent {
  double t = 0.0;
  double length = 0.0;     // m
  double heading = 0.0;    // rad, cumulative relative device heading
  double frequency = 0.0;  // Hz
};

enum class DpcFlag { Stable, InProgress };

/// Transition of the device-position-change flag. heading is the device
/// relative heading the filter should use for the transition: the heading
/// before the manipulation started (InProgress) or after it settled (Stable).
struct DpcFlagEvent {
  double t = 0.0;
  DpcFlag flag = DpcFlag::Stable;
  double heading = 0.0;
};

struct FloorEvent {
  double t = 0.0;
  double delta_altitude = 0.0;  // m, since the previous event
  int new_floor = 0;
  double latency = 0.0;         // s between the end of the climb and the event
};

using PdrEvent = std::variant<StepEvent, DpcFlagEvent, FloorEvent>;

constexpr double kGravity = 9.81;

}  // namespace flp::pdr
