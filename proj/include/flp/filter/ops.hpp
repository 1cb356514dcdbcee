#pragma once

#include <optional>
#include <span>
#include <string>

#include "flp/filter/cloud.hpp"
#include "flp/filter/epoch.hpp"
#include "flp/map/partition_cache.hpp"

namespace flp::filter {

/// Motion update: each particle moves (1 + eps)(L + n_d) along theta + n_a + beta,
/// then eps and beta take a random-walk step. Particles in a stairway zone use
/// step_count * the stairway step length instead of L. Epochs without steps
/// leave the cloud unchanged. indices restricts the update to a subset.
void predict(Cloud& cloud, const UpdateEpoch& epoch, const NoiseConfig& noise, const map::MapModel& map);
void predict(Cloud& cloud, const UpdateEpoch& epoch, const NoiseConfig& noise, const map::MapModel& map,
             std::span<const std::size_t> indices);

/// Device-position change: a random fraction of the particles redraws beta
/// uniformly; the others shift beta by heading_before - heading_after so the
/// user heading is preserved. Weights are untouched.
void apply_dpc(Cloud& cloud, double heading_before, double heading_after, double uniform_fraction);

struct MeasurementOutcome {
  bool gnss_used = false;
  std::optional<measurements::RssObservation> rss;  // the observation used, if any
  const map::Beacon* beacon = nullptr;
  bool high_rss = false;  // rss at or above the high-value threshold
};

/// Multiplies weights by the likelihood of the epoch's measurements and by
/// the accessibility factor, then renormalises. Factors are taken relative to
/// the likelihood peak, so a GNSS-denied particle (factor 1) ranks with a
/// perfect fit. Throws UnknownBeacon.
MeasurementOutcome measurement_update(Cloud& cloud, std::span<const measurements::Measurement> measurements,
                                      const map::MapModel& map, const FilterConfig& config);

struct CollisionSummary {
  std::size_t killed = 0;
  std::size_t corrected = 0;
  std::size_t evicted = 0;     // particles zeroed because their partition left the cache
  std::size_t out_of_map = 0;
  bool rejected = false;       // every particle died: the displacement was undone instead
  map::CollisionStats stats;
};

/// Checks every displacement start -> position against the walls of the
/// partitions it touches, fetched through the cache. Corrected particles
/// move to the corrected end point; killed and evicted ones get weight 0.
/// Survivors are renormalised. When nothing survives, the displacement is
/// rejected: every particle returns to its start with its previous weight.
CollisionSummary apply_collisions(Cloud& cloud, const map::MapModel& map, map::PartitionCache& cache,
                                  const map::CorrectionPolicy& policy);

struct FloorChangeOutcome {
  std::size_t kept = 0;
  std::size_t resampled = 0;
  std::vector<std::size_t> resampled_indices;
  std::vector<std::size_t> exit_choice;  // index into exits() for every resampled particle
  bool fallback_global = false;          // the new floor had no stairway
};

/// Exit points of every stairway zone on floor, in zone order.
std::vector<Point2> stairway_exits(const map::Floor& floor);

/// Particles inside a stairway zone move to the new floor as they are; the
/// others respawn around a stairway exit of the new floor picked with
/// probability proportional to exp(-distance / lambda). Falls back to a global
/// reinitialisation when the new floor has no stairway.
FloorChangeOutcome handle_floor_change(Cloud& cloud, int new_floor, const map::MapModel& map,
                                       const FilterConfig& config);

struct ResampleOutcome {
  std::size_t replaced = 0;
  bool anchored = false;        // replacements spawned around a beacon
  bool fallback_global = false; // everything was dead and no beacon anchor existed
};

/// Replaces particles below the weight threshold by jittered copies of the
/// survivors (drawn proportionally to weight), or around anchor when given.
/// Replacements get weight 1/N and the cloud is normalised again.
ResampleOutcome partial_resample(Cloud& cloud, const FilterConfig& config, const map::MapModel& map,
                                 const map::Beacon* anchor = nullptr, int fallback_floor = 0);

}  // namespace flp::filter
