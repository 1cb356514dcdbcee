#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "flp/common/angles.hpp"
#include "flp/map/collision.hpp"
#include "flp/measurements/models.hpp"

namespace flp::filter {

/// Process noise of the motion model, per prediction epoch. Zero values are
/// allowed and switch the corresponding term off.
struct NoiseConfig {
  double sigma_epsilon = 0.01;
  double sigma_beta = deg2rad(0.5);
  double sigma_d = 0.1;             // m
  double sigma_alpha = deg2rad(1.0);

  static NoiseConfig zero() { return {0.0, 0.0, 0.0, 0.0}; }
  void validate() const;
};

struct FilterConfig {
  std::size_t n_particles = 1000;
  std::size_t n_clusters = 5;
  double resample_weight_threshold = 0.0;  // 0 selects 0.1 / n_particles
  double dpc_uniform_fraction = 0.5;
  double high_rss_threshold = -60.0;       // dBm
  std::size_t high_rss_count = 1;
  double beacon_resample_radius = 3.0;     // m
  double stairway_decay_lambda = 10.0;     // m
  std::size_t steps_per_epoch = 3;
  bool accessibility = true;

  double init_epsilon_sigma = 0.05;
  double resample_jitter = 0.1;            // m
  double exit_sigma = 1.0;                 // m, spread around a stairway exit
  double spawn_clearance = 0.15;           // m, minimum wall distance for global spawns
  std::size_t cache_slots = 5;
  std::size_t max_rejected_epochs = 3;     // consecutive wiped-out epochs before a reinitialisation
  bool short_term_prediction = true;

  NoiseConfig noise;
  measurements::RssModelParams rss;
  map::CorrectionPolicy correction;

  double weight_threshold() const noexcept {
    return resample_weight_threshold > 0.0 ? resample_weight_threshold : 0.1 / static_cast<double>(n_particles);
  }
  /// Throws InvalidArgument naming the first bad field.
  void validate() const;
};

/// Flat "key = value" text, '#' starts a comment. Unknown keys and malformed
/// values throw Error(InvalidArgument) with the line number.
FilterConfig parse_config(std::string_view text, const std::string& source_name = "<config>");
FilterConfig load_config(const std::string& path);
std::string to_config_text(const FilterConfig& config);

}  // namespace flp::filter
