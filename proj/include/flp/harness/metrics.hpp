#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "flp/harness/ground_truth.hpp"

namespace flp::harness {

enum class Verdict { Perfect, Good, Middle, Bad };

std::string_view to_string(Verdict v) noexcept;

/// D5 bins: >= 80 Perfect, >= 60 Good, >= 40 Middle, otherwise Bad.
Verdict classify(double d5) noexcept;

struct EstimateSample {
  double t = 0.0;
  Point2 position;
  int floor = 0;
};

struct MetricsReport {
  double d5 = 0.0;    // % of samples with error < 5 m
  double d10 = 0.0;   // % of samples with error < 10 m
  double rmse = 0.0;  // m
  double mean_error = 0.0;
  double floor_accuracy = 0.0;  // % of samples on the right floor
  Verdict verdict = Verdict::Bad;
  std::vector<std::pair<double, double>> error_series;  // (t, m)
};

/// Errors are sampled at the truth timestamps with the latest estimate at or
/// before each one (samples before the first estimate are skipped). Throws
/// NoOverlap when the estimates cover less than 90 % of the truth time span.
MetricsReport compute_metrics(std::span<const EstimateSample> estimates, std::span<const TruthSample> truth);

/// Metrics of a ready-made error series.
MetricsReport metrics_from_errors(std::vector<std::pair<double, double>> errors);

}  // namespace flp::harness
