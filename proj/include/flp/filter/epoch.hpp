#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flp/filter/config.hpp"
#include "flp/measurements/models.hpp"
#include "flp/pdr/types.hpp"

namespace flp::filter {

struct UpdateEpoch {
  enum class Trigger { Step, HighRss, Flush };
  double t = 0.0;
  double aggregated_length = 0.0;   // m, length of the resultant of the steps
  double aggregated_heading = 0.0;  // rad, direction of the resultant
  std::size_t step_count = 0;
  Trigger trigger = Trigger::Step;
  std::vector<measurements::Measurement> measurements;  // latest GNSS fix and strongest RSS at most
};

/// Latest GNSS fix plus the strongest RSS observation out of pending.
std::vector<measurements::Measurement> select_measurements(std::span<const measurements::Measurement> pending);

/// Builds an epoch from everything pending, regardless of the trigger rules.
UpdateEpoch make_epoch(std::span<const pdr::StepEvent> steps, std::span<const measurements::Measurement> pending,
                       UpdateEpoch::Trigger trigger);

/// Emits an epoch once steps_per_epoch steps are pending, or once
/// high_rss_count observations at or above high_rss_threshold are pending.
std::optional<UpdateEpoch> epoch_trigger(std::span<const pdr::StepEvent> steps,
                                         std::span<const measurements::Measurement> pending,
                                         const FilterConfig& config);

}  // namespace flp::filter
