#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "flp/map/map_model.hpp"

namespace flp::map {

struct PartitionKey {
  int floor = 0;
  int id = 0;
  auto operator<=>(const PartitionKey&) const = default;
};

/// Supplies partitions on demand (the application processor or a remote store
/// in a deployed system). Returning nullptr means the partition is unavailable.
using PartitionLoader = std::function<std::shared_ptr<const Partition>(PartitionKey)>;

/// Particle count currently attributed to a resident partition.
using OccupancyFn = std::function<std::size_t(PartitionKey)>;

/// Loader backed by an in-memory map. The map must outlive the loader.
PartitionLoader map_loader(const MapModel& map);

struct FetchResult {
  std::shared_ptr<const Partition> partition;
  std::optional<PartitionKey> evicted;  // the filter resamples this partition's particles
};

/// Bounded set of resident partitions. When a miss happens with every slot
/// taken, an empty partition is evicted first, otherwise the one holding the
/// fewest particles (lowest key on ties).
class PartitionCache {
 public:
  explicit PartitionCache(PartitionLoader loader, std::size_t slots = 5);

  /// Throws Error(LoadFailed) if the loader cannot supply key.
  FetchResult fetch(PartitionKey key, const OccupancyFn& occupancy);

  bool resident(PartitionKey key) const noexcept;
  std::size_t size() const noexcept { return slots_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::vector<PartitionKey> keys() const;
  std::size_t loads() const noexcept { return loads_; }
  std::size_t evictions() const noexcept { return evictions_; }

 private:
  struct Slot {
    PartitionKey key;
    std::shared_ptr<const Partition> partition;
  };

  PartitionLoader loader_;
  std::size_t capacity_;
  std::vector<Slot> slots_;
  std::size_t loads_ = 0;
  std::size_t evictions_ = 0;
};

inline FetchResult cache_fetch(PartitionCache& cache, PartitionKey key, const OccupancyFn& occupancy) {
  return cache.fetch(key, occupancy);
}

}  // namespace flp::map
