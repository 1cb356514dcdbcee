#pragma once

#include <span>
#include <string>

#include "flp/harness/metrics.hpp"

namespace flp::harness {

/// Renders one panel per floor: walls in grey, truth in black, estimate in
/// red, each sample drawn on the panel of its own floor.
std::string trajectory_svg(const map::MapModel& map, std::span<const TruthSample> truth,
                           std::span<const EstimateSample> estimates, const std::string& title);

void write_trajectory_svg(const std::string& path, const map::MapModel& map, std::span<const TruthSample> truth,
                          std::span<const EstimateSample> estimates, const std::string& title);

}  // namespace flp::harness
