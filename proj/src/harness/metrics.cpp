#include "flp/harness/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "flp/common/error.hpp"

namespace flp::harness {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Perfect: return "Perfect";
    case Verdict::Good: return "Good";
    case Verdict::Middle: return "Middle";
    case Verdict::Bad: return "Bad";
  }
  return "Bad";
}

Verdict classify(double d5) noexcept {
  if (d5 >= 80.0) return Verdict::Perfect;
  if (d5 >= 60.0) return Verdict::Good;
  if (d5 >= 40.0) return Verdict::Middle;
  return Verdict::Bad;
}

MetricsReport metrics_from_errors(std::vector<std::pair<double, double>> errors) {
  MetricsReport r;
  r.error_series = std::move(errors);
  if (r.error_series.empty()) return r;
  std::size_t below5 = 0, below10 = 0;
  double sq = 0.0, sum = 0.0;
  for (const auto& [t, e] : r.error_series) {
    below5 += e < 5.0;
    below10 += e < 10.0;
    sq += e * e;
    sum += e;
  }
  const double n = static_cast<double>(r.error_series.size());
  r.d5 = 100.0 * static_cast<double>(below5) / n;
  r.d10 = 100.0 * static_cast<double>(below10) / n;
  r.rmse = std::sqrt(sq / n);
  r.mean_error = sum / n;
  r.floor_accuracy = 100.0;
  r.verdict = classify(r.d5);
  return r;
}

MetricsReport compute_metrics(std::span<const EstimateSample> est, std::span<const TruthSample> truth) {
  if (truth.empty()) fail(ErrorCode::NoOverlap, "empty ground truth");
  if (est.empty()) fail(ErrorCode::NoOverlap, "no estimates");
  const double t0 = truth.front().t;
  const double t1 = truth.back().t;
  const double span = t1 - t0;
  const double covered = std::min(t1, est.back().t) - std::max(t0, est.front().t);
  if (span > 0.0 ? covered < 0.9 * span : covered < 0.0)
    fail(ErrorCode::NoOverlap, "estimates cover less than 90% of the ground truth");

  std::vector<std::pair<double, double>> errors;
  std::size_t on_floor = 0;
  std::size_t j = 0;
  for (const auto& s : truth) {
    while (j + 1 < est.size() && est[j + 1].t <= s.t) ++j;
    if (est[j].t > s.t) continue;
    errors.emplace_back(s.t, map::distance(est[j].position, s.position));
    on_floor += est[j].floor == s.floor;
  }
  MetricsReport r = metrics_from_errors(std::move(errors));
  if (!r.error_series.empty())
    r.floor_accuracy = 100.0 * static_cast<double>(on_floor) / static_cast<double>(r.error_series.size());
  return r;
}

}  // namespace flp::harness
