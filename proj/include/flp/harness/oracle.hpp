#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flp/map/map_model.hpp"

namespace flp::harness {

struct OracleHit {
  bool hit = false;
  map::Point2 point;
  double t = 0.0;             // along the displacement
  std::size_t wall = 0;       // index into the wall list
};

/// Unpruned reference: tests the displacement against every wall with
/// orientation predicates and reports the earliest hit. Collinear overlaps
/// count as hits at the overlap point nearest the displacement origin.
OracleHit naive_collision_oracle(const map::Segment& disp, std::span<const map::Segment> walls);

struct OracleSweepReport {
  std::size_t scenes = 0;
  std::size_t hits = 0;              // scenes where the oracle reports a hit
  std::size_t disagreements = 0;     // kill/no-kill mismatches
  double max_point_error = 0.0;      // first-hit distance between both paths
};

/// Random scenes of 1..12 walls in a 10 m square with one displacement of up
/// to 3 m each; some walls are placed to touch or overlap the displacement.
/// Compares collision_query (corrections disabled) with the oracle.
OracleSweepReport oracle_sweep(std::size_t scenes, std::uint32_t seed);

struct PruningReport {
  std::size_t queries = 0;
  std::size_t pruned_exact_tests = 0;
  std::size_t naive_exact_tests = 0;

  double reduction() const {
    return pruned_exact_tests == 0 ? 0.0 : static_cast<double>(naive_exact_tests) / static_cast<double>(pruned_exact_tests);
  }
};

/// 100-wall partition (30 x 30 m, room-like wall pieces) queried with
/// epoch-sized displacements (up to 2.5 m).
map::Partition pruning_benchmark_partition(std::uint32_t seed);
PruningReport pruning_benchmark(std::size_t queries, std::uint32_t seed);

}  // namespace flp::harness
