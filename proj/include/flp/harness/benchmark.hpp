#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flp/harness/runner.hpp"

namespace flp::harness {

struct BenchmarkOptions {
  std::size_t seeds = 10;       // run seeds are scenario.seed + 0 .. seeds - 1
  std::string out_dir;          // empty: no files
  std::size_t threads = 0;      // 0: hardware concurrency
  bool write_plots = true;
};

struct RunRow {
  std::string scenario;
  std::uint32_t seed = 0;
  bool ok = false;
  std::string error;            // "Code: message" when the run failed
  MetricsReport metrics;        // error_series dropped after the CSV is written
};

struct ScenarioSummary {
  std::string scenario;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double d5 = 0.0;
  double d10 = 0.0;
  double rmse = 0.0;
  std::size_t verdicts[4] = {0, 0, 0, 0};  // Perfect, Good, Middle, Bad
};

struct BenchmarkReport {
  std::vector<RunRow> rows;           // scenario order, then seed order
  std::vector<ScenarioSummary> summary;
};

/// Runs every (scenario, seed) pair, in parallel across runs. A failing run
/// is recorded with its error and does not stop the batch. With out_dir set,
/// writes report.csv, summary.txt, errors_<run>.csv and trajectory_<run>.svg.
BenchmarkReport run_benchmark(const std::vector<Scenario>& scenarios, const filter::FilterConfig& config,
                              const BenchmarkOptions& options);

/// Aggregate table with the columns Scenario, Runs, D5 (%), D10 (%), RMS (m), Verdicts.
std::string format_summary(const BenchmarkReport& report);
std::string report_csv(const BenchmarkReport& report);
std::string run_id(const std::string& scenario, std::uint32_t seed);

}  // namespace flp::harness
