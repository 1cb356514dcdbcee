#include "flp/pdr/dpc_detector.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "flp/common/error.hpp"

namespace flp::pdr {

double vertical_shift(const Eigen::Vector3d& z_ref, const Eigen::Vector3d& z_k) noexcept {
  return std::asin(std::clamp(z_ref.cross(z_k).norm(), 0.0, 1.0));
}

DpcDetector::DpcDetector(DpcConfig config) : config_(config) {}

std::optional<DpcFlag> DpcDetector::push(double t, const Eigen::Vector3d& accel) {
  if (!started_) {
    started_ = true;
    first_t_ = t;
  }
  accel_window_.emplace_back(t, accel);
  accel_sum_ += accel;
  while (accel_window_.front().first <= t - config_.average_window) {
    accel_sum_ -= accel_window_.front().second;
    accel_window_.pop_front();
  }
  if (t - first_t_ < config_.average_window - 1e-9 || accel_sum_.norm() == 0.0) return std::nullopt;
  state_.z_cur = accel_sum_.normalized();
  if (!has_ref_) {
    has_ref_ = true;
    state_.z_ref = state_.z_cur;
  }
  state_.alpha = vertical_shift(state_.z_ref, state_.z_cur);

  alpha_window_.emplace_back(t, state_.alpha);
  while (alpha_window_.front().first <= t - config_.release_window) alpha_window_.pop_front();

  if (state_.flag == DpcFlag::Stable) {
    if (state_.alpha > config_.trigger_angle) {
      state_.flag = DpcFlag::InProgress;
      alpha_window_.clear();
      alpha_window_.emplace_back(t, state_.alpha);
      return DpcFlag::InProgress;
    }
    return std::nullopt;
  }

  if (alpha_window_.back().first - alpha_window_.front().first < config_.release_window - 2e-2) return std::nullopt;
  double mean = 0.0;
  for (const auto& [_, a] : alpha_window_) mean += a;
  mean /= static_cast<double>(alpha_window_.size());
  double var = 0.0;
  for (const auto& [_, a] : alpha_window_) var += (a - mean) * (a - mean);
  if (std::sqrt(var / static_cast<double>(alpha_window_.size())) < config_.release_std) {
    state_.flag = DpcFlag::Stable;
    state_.z_ref = state_.z_cur;
    state_.alpha = 0.0;
    alpha_window_.clear();
    return DpcFlag::Stable;
  }
  return std::nullopt;
}

std::vector<DpcFlagEvent> detect_dpc(std::span<const ImuSample> stream, const DpcConfig& config) {
  if (stream.empty() || stream.back().t - stream.front().t < 2.0)
    fail(ErrorCode::StreamTooShort, "DPC detection needs at least 2 s of samples");
  DpcDetector det(config);
  std::vector<DpcFlagEvent> out;
  for (const auto& s : stream)
    if (auto f = det.push(s.t, s.accel)) out.push_back({s.t, *f, 0.0});
  return out;
}

}  // namespace flp::pdr
