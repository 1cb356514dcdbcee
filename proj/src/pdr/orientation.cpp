#include "flp/pdr/orientation.hpp"

#include <cmath>

#include "flp/common/error.hpp"

namespace flp::pdr {

OrientationState update_orientation(const OrientationState& state, const ImuSample& sample, double dt,
                                    const OrientationConfig& config) {
  OrientationState next = state;
  const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  if (!state.initialized) {
    if (sample.accel.norm() > 0.0) next.q = Eigen::Quaterniond::FromTwoVectors(sample.accel, up);
    next.q.normalize();
    next.initialized = true;
    return next;
  }
  if (!(dt > 0.0 && dt <= 0.1)) fail(ErrorCode::InvalidArgument, "orientation update needs dt in (0, 0.1] s");

  const Eigen::Vector3d omega = sample.gyro - state.gyro_bias;
  const double angle = omega.norm() * dt;
  if (angle > 0.0) {
    const Eigen::Quaterniond dq(Eigen::AngleAxisd(angle, omega.normalized()));
    // Rotation rate about the reference vertical, evaluated at mid-step.
    const Eigen::Quaterniond half = state.q * Eigen::Quaterniond(Eigen::AngleAxisd(angle / 2.0, omega.normalized()));
    next.heading += dt * (half * omega).z();
    next.q = state.q * dq;
  }

  const double a_norm = sample.accel.norm();
  if (std::abs(a_norm - kGravity) < config.accel_gate && a_norm > 0.0) {
    const Eigen::Vector3d g_ref = next.q * (sample.accel / a_norm);
    const Eigen::Vector3d axis = g_ref.cross(up);  // horizontal, so yaw is untouched
    const double s = axis.norm();
    if (s > 1e-12) {
      const double err = std::atan2(s, g_ref.dot(up));
      next.q = Eigen::Quaterniond(Eigen::AngleAxisd(config.accel_gain * err, axis / s)) * next.q;
    }
  }
  next.q.normalize();
  return next;
}

std::optional<Eigen::Vector3d> estimate_gyro_bias(std::span<const ImuSample> window,
                                                  const StaticThresholds& thresholds) {
  if (window.size() < 2 || window.back().t - window.front().t < 1.0 - 1e-9)
    fail(ErrorCode::InvalidArgument, "gyro bias estimation needs a window of at least 1 s");
  const double n = static_cast<double>(window.size());
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  double g_sum = 0.0, g_sq = 0.0, a_sum = 0.0, a_sq = 0.0;
  for (const auto& s : window) {
    mean += s.gyro;
    const double g = s.gyro.norm();
    const double a = s.accel.norm();
    g_sum += g;
    g_sq += g * g;
    a_sum += a;
    a_sq += a * a;
  }
  auto stddev = [n](double sum, double sq) { return std::sqrt(std::max(sq / n - (sum / n) * (sum / n), 0.0)); };
  if (stddev(g_sum, g_sq) >= thresholds.gyro_norm_std || stddev(a_sum, a_sq) >= thresholds.accel_norm_std)
    return std::nullopt;
  return mean / n;
}

}  // namespace flp::pdr
