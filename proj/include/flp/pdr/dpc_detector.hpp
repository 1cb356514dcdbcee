#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "flp/pdr/types.hpp"

namespace flp::pdr {

struct DpcConfig {
  double average_window = 1.0;   // s, accelerometer averaging for the body-frame vertical
  double trigger_angle = 0.349065850398865915;  // 20 deg
  double release_std = 0.0349065850398865915;   // 2 deg
  double release_window = 1.0;   // s
};

struct DpcState {
  Eigen::Vector3d z_ref = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d z_cur = Eigen::Vector3d::UnitZ();
  double alpha = 0.0;  // rad, in [0, pi/2]
  DpcFlag flag = DpcFlag::Stable;
};

/// Angle between two unit vectors as asin of the cross-product norm.
double vertical_shift(const Eigen::Vector3d& z_ref, const Eigen::Vector3d& z_k) noexcept;

/// Streaming device-position-change detector: compares the averaged
/// body-frame vertical against the one recorded at the last stable phase.
class DpcDetector {
 public:
  explicit DpcDetector(DpcConfig config = {});

  /// Returns the new flag when this sample causes a transition.
  std::optional<DpcFlag> push(double t, const Eigen::Vector3d& accel);

  const DpcState& state() const noexcept { return state_; }
  bool ready() const noexcept { return has_ref_; }

 private:
  DpcConfig config_;
  DpcState state_;
  bool has_ref_ = false;
  std::deque<std::pair<double, Eigen::Vector3d>> accel_window_;
  Eigen::Vector3d accel_sum_ = Eigen::Vector3d::Zero();
  std::deque<std::pair<double, double>> alpha_window_;
  double first_t_ = 0.0;
  bool started_ = false;
};

/// Batch form returning flag transitions. Throws StreamTooShort under 2 s.
std::vector<DpcFlagEvent> detect_dpc(std::span<const ImuSample> stream, const DpcConfig& config = {});

}  // namespace flp::pdr
