#pragma once

#include <span>
#include <vector>

#include "flp/map/map_model.hpp"

namespace flp::map {

struct PartitioningOptions {
  std::size_t max_walls = 100;
  double target_area = 1000.0;  // m^2, cells larger than this are split
  double min_area = 10.0;       // m^2, area-driven splits never go below this
  double margin = 1.0;          // m, padding of the floor bounding box
  int max_depth = 48;
};

/// Recursive bisection of the floor bounding box along its longer axis until
/// every cell holds at most max_walls walls (walls crossing a cut go to both
/// cells) and, where possible, no cell exceeds target_area.
///
/// Throws Error(SinglePointOverflow) when more than max_walls walls cannot be
/// separated by any cut (they share one point).
std::vector<Partition> compile_partitions(std::span<const Wall> walls, std::span<const Zone> zones,
                                          const PartitioningOptions& options = {});

}  // namespace flp::map
