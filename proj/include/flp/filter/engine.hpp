#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "flp/filter/clustering.hpp"
#include "flp/filter/ops.hpp"
#include "flp/pdr/pdr_pipeline.hpp"

namespace flp::filter {

struct EngineCounters {
  std::uint64_t epochs = 0;
  std::uint64_t steps = 0;
  std::uint64_t killed = 0;
  std::uint64_t corrected = 0;
  std::uint64_t evicted = 0;
  std::uint64_t resampled = 0;
  std::uint64_t global_fallbacks = 0;
  std::uint64_t floor_changes = 0;
  std::uint64_t skipped_rss = 0;  // observations from beacons on another floor
  std::uint64_t rejected_epochs = 0;  // displacements undone because no particle survived
};

/// The fused localization engine: feeds PDR events and measurements through
/// the particle filter and exposes the latest estimate.
class Engine {
 public:
  Engine(std::shared_ptr<const map::MapModel> map, FilterConfig config, const Prior& prior, std::uint32_t seed,
         pdr::PdrConfig pdr_config = {});

  /// Raw sensor sample; runs the internal PDR pipeline.
  void feed(const pdr::ImuSample& sample);
  void feed(const pdr::StepEvent& step);
  void feed(const measurements::Measurement& m);
  void feed(const pdr::DpcFlagEvent& flag);
  void feed(const pdr::FloorEvent& event);
  void feed(const pdr::PdrEvent& event);

  /// Runs an epoch with whatever is pending.
  void flush();

  /// Latest estimate, dead-reckoned through the steps since the last epoch
  /// when short-term prediction is enabled. Before the first epoch this is
  /// the estimate of the initial cloud.
  std::optional<Estimate> poll() const;
  /// Estimate of the last epoch without short-term prediction.
  const std::optional<Estimate>& last_epoch_estimate() const noexcept { return estimate_; }

  const Cloud& cloud() const noexcept { return cloud_; }
  const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
  const EngineCounters& counters() const noexcept { return counters_; }
  const map::PartitionCache& cache() const noexcept { return cache_; }
  const FilterConfig& config() const noexcept { return config_; }
  const map::MapModel& map() const noexcept { return *map_; }
  bool dpc_in_progress() const noexcept { return dpc_active_; }
  int current_floor() const noexcept { return floor_; }

  /// Runs one full epoch (used by benchmarks and tests).
  void run_epoch(const UpdateEpoch& epoch);

 private:
  void maybe_trigger();

  std::shared_ptr<const map::MapModel> map_;
  FilterConfig config_;
  pdr::PdrConfig pdr_config_;
  Cloud cloud_;
  map::PartitionCache cache_;
  std::vector<Cluster> clusters_;
  std::optional<Estimate> estimate_;
  std::optional<pdr::PdrPipeline> pdr_;
  std::vector<pdr::PdrEvent> pdr_events_;

  std::vector<pdr::StepEvent> pending_steps_;
  std::vector<measurements::Measurement> pending_meas_;
  std::vector<pdr::StepEvent> since_output_;
  std::deque<pdr::StepEvent> recent_steps_;

  bool dpc_active_ = false;
  double dpc_heading_before_ = 0.0;
  std::optional<std::pair<double, double>> pending_dpc_;  // heading before, heading after
  int floor_ = 0;
  std::size_t rejected_run_ = 0;
  double last_t_ = 0.0;
  EngineCounters counters_;
};

}  // namespace flp::filter
