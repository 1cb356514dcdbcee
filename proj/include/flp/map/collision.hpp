#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flp/common/angles.hpp"
#include "flp/map/map_model.hpp"

namespace flp::map {

/// Deterministic corrections applied instead of killing a particle.
struct CorrectionPolicy {
  bool enabled = true;
  double grazing_angle = deg2rad(20.0);  // below this incidence the remainder slides along the wall
  double wall_margin = 0.02;             // m kept between the corrected end point and the wall
  double head_on_fraction = 0.8;         // hits beyond this fraction of the displacement are truncated

  static CorrectionPolicy disabled() {
    CorrectionPolicy p;
    p.enabled = false;
    return p;
  }
};

/// Counters for the pruning benchmark.
struct CollisionStats {
  std::size_t bbox_tests = 0;
  std::size_t exact_tests = 0;
};

struct CollisionVerdict {
  enum class Kind { NoHit, Corrected, Kill };
  Kind kind = Kind::NoHit;
  Segment new_disp;             // valid when Corrected
  const Wall* wall = nullptr;   // first wall hit (Corrected or Kill)
  Point2 hit;                   // first hit point
  double hit_fraction = 0.0;    // position of the first hit along disp
};

/// Indices of the walls whose bbox overlaps the bbox of disp.
std::vector<std::size_t> prune_candidates(const Segment& disp, const Partition& partition);

/// Collision check of one displacement against a set of walls. The broad
/// phase is a bbox overlap test, the narrow phase an exact segment test.
CollisionVerdict collision_query(const Segment& disp, std::span<const Wall* const> walls,
                                 const CorrectionPolicy& policy, CollisionStats* stats = nullptr);

CollisionVerdict collision_query(const Segment& disp, const Partition& partition,
                                 const CorrectionPolicy& policy, CollisionStats* stats = nullptr);

}  // namespace flp::map
