#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "flp/filter/cloud.hpp"
#include "flp/pdr/types.hpp"

namespace flp::filter {

struct Cluster {
  Point2 center;
  Eigen::Vector4d mean_state = Eigen::Vector4d::Zero();  // x, y, epsilon, beta (circular mean)
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  double weight = 0.0;
  std::size_t members = 0;
  int floor = 0;  // weighted majority of the members
};

/// One Lloyd iteration over particle positions. previous supplies the centers;
/// when it does not hold exactly k clusters, k particles drawn proportionally
/// to weight seed them. Empty clusters are reseeded at the heaviest particles.
std::vector<Cluster> kmeans_step(Cloud& cloud, const std::vector<Cluster>& previous, std::size_t k);

struct Estimate {
  double t = 0.0;
  Point2 position;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  int floor = 0;
  double cluster_weight = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
};

/// Mean of the heaviest cluster (lowest index on ties). Throws InvalidArgument when empty.
Estimate output_estimate(std::span<const Cluster> clusters);

/// Dead-reckons the last estimate through the steps received since, using
/// its beta and epsilon.
Point2 short_term_predict(const Estimate& last, std::span<const pdr::StepEvent> steps);

}  // namespace flp::filter
