#pragma once

#include <optional>
#include <span>

#include <Eigen/Geometry>

#include "flp/pdr/types.hpp"

namespace flp::pdr {

struct OrientationConfig {
  double accel_gain = 0.02;       // fraction of the tilt error removed per sample
  double accel_gate = 1.0;        // m/s^2 around g within which accel is trusted
};

/// Device attitude from accelerometer and gyroscope only. heading is the
/// unwrapped rotation about the reference vertical since initialisation;
/// absolute heading is left to the filter.
struct OrientationState {
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();  // body -> reference
  Eigen::Vector3d gyro_bias = Eigen::Vector3d::Zero();
  double heading = 0.0;
  bool initialized = false;
};

/// First call levels the attitude from the accelerometer; later calls
/// propagate with the bias-corrected gyro and nudge roll/pitch toward gravity.
/// Throws InvalidArgument unless dt is in (0, 0.1].
OrientationState update_orientation(const OrientationState& state, const ImuSample& sample, double dt,
                                    const OrientationConfig& config = {});

struct StaticThresholds {
  double gyro_norm_std = 0.01;   // rad/s
  double accel_norm_std = 0.05;  // m/s^2
};

/// Mean gyro over a still window, or nullopt when the window is not static.
/// Throws InvalidArgument for windows shorter than 1 s.
std::optional<Eigen::Vector3d> estimate_gyro_bias(std::span<const ImuSample> window,
                                                  const StaticThresholds& thresholds = {});

}  // namespace flp::pdr
