#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flp/filter/engine.hpp"
#include "flp/harness/metrics.hpp"
#include "flp/harness/synth.hpp"

namespace flp::harness {

struct RunResult {
  std::string scenario;
  std::uint32_t seed = 0;
  MetricsReport metrics;
  std::vector<EstimateSample> estimates;  // one per truth sample
  GroundTruth truth;
  filter::EngineCounters counters;
};

/// Called after the engine has consumed everything up to each truth sample.
using RunObserver = std::function<void(const TruthSample&, const filter::Engine&)>;

/// Replays the traces through a fresh engine and scores the output.
RunResult run_traces(const Scenario& scenario, const SensorTraces& traces, const filter::FilterConfig& config,
                     std::uint32_t engine_seed, const RunObserver& observer = {});

/// Synthesises the scenario with seed and replays it (seed drives both the
/// sensor noise and the filter).
RunResult run_scenario(const Scenario& scenario, const filter::FilterConfig& base_config, std::uint32_t seed,
                       const RunObserver& observer = {});

}  // namespace flp::harness
