#include "flp/map/partition_cache.hpp"

#include <string>

#include "flp/common/error.hpp"

namespace flp::map {

PartitionLoader map_loader(const MapModel& map) {
  return [&map](PartitionKey key) -> std::shared_ptr<const Partition> {
    if (!map.has_floor(key.floor)) return nullptr;
    const Partition* p = map.floors[static_cast<std::size_t>(key.floor)].partition(key.id);
    if (!p) return nullptr;
    // Non-owning alias: the map owns the storage.
    return std::shared_ptr<const Partition>(std::shared_ptr<const Partition>{}, p);
  };
}

PartitionCache::PartitionCache(PartitionLoader loader, std::size_t slots)
    : loader_(std::move(loader)), capacity_(slots) {
  if (capacity_ == 0) fail(ErrorCode::InvalidArgument, "partition cache needs at least one slot");
  slots_.reserve(capacity_);
}

bool PartitionCache::resident(PartitionKey key) const noexcept {
  for (const auto& s : slots_)
    if (s.key == key) return true;
  return false;
}

std::vector<PartitionKey> PartitionCache::keys() const {
  std::vector<PartitionKey> out;
  for (const auto& s : slots_) out.push_back(s.key);
  return out;
}

FetchResult PartitionCache::fetch(PartitionKey key, const OccupancyFn& occupancy) {
  for (const auto& s : slots_)
    if (s.key == key) return {s.partition, std::nullopt};

  auto loaded = loader_(key);
  if (!loaded)
    fail(ErrorCode::LoadFailed,
         "partition " + std::to_string(key.id) + " of floor " + std::to_string(key.floor) + " is unavailable");
  ++loads_;

  FetchResult result;
  result.partition = loaded;
  if (slots_.size() < capacity_) {
    slots_.push_back({key, std::move(loaded)});
    return result;
  }

  std::size_t victim = 0;
  std::size_t victim_count = occupancy(slots_[0].key);
  for (std::size_t i = 1; i < slots_.size(); ++i) {
    const std::size_t c = occupancy(slots_[i].key);
    if (c < victim_count || (c == victim_count && slots_[i].key < slots_[victim].key)) {
      victim = i;
      victim_count = c;
    }
  }
  result.evicted = slots_[victim].key;
  ++evictions_;
  slots_[victim] = {key, std::move(loaded)};
  return result;
}

}  // namespace flp::map
