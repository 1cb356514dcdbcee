#include <algorithm>
#include <map>

#include "flp/filter/ops.hpp"

namespace flp::filter {

namespace {

double weight_sum_of(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

}  // namespace

CollisionSummary apply_collisions(Cloud& cloud, const map::MapModel& map, map::PartitionCache& cache,
                                  const map::CorrectionPolicy& policy) {
  CollisionSummary out;
  using Key = map::PartitionKey;
  std::vector<double> weights(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) weights[i] = cloud.particles[i].weight;

  // Group live particles by the partition their displacement starts in.
  std::map<Key, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto& p = cloud.particles[i];
    if (!(p.weight > 0.0)) continue;
    const auto part = map.has_floor(p.floor) ? map::try_locate(p.start, map.floors[static_cast<std::size_t>(p.floor)])
                                             : std::nullopt;
    if (!part) {
      p.weight = 0.0;
      ++out.out_of_map;
      continue;
    }
    groups[{p.floor, *part}].push_back(i);
  }

  std::map<Key, std::size_t> occupancy;
  for (const auto& [k, v] : groups) occupancy[k] = v.size();
  const map::OccupancyFn occ = [&occupancy](Key k) {
    auto it = occupancy.find(k);
    return it == occupancy.end() ? std::size_t{0} : it->second;
  };

  std::vector<std::pair<Key, std::vector<std::size_t>*>> order;
  for (auto& [k, v] : groups) order.emplace_back(k, &v);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second->size() > b.second->size(); });

  std::map<Key, bool> evicted;
  std::vector<const map::Wall*> walls;
  std::vector<std::shared_ptr<const map::Partition>> held;
  for (const auto& [key, members] : order) {
    if (evicted[key]) {
      // Pushed out of the cache by a busier group before it could run.
      for (auto i : *members) cloud.particles[i].weight = 0.0;
      out.evicted += members->size();
      continue;
    }
    const map::Floor& floor = map.floors[static_cast<std::size_t>(key.floor)];

    map::AxisBox span = map::AxisBox::empty();
    for (auto i : *members) {
      const auto& p = cloud.particles[i];
      span.expand(p.start);
      span.expand(p.position());
    }

    // Every partition the group's displacements can reach goes through the cache.
    held.clear();
    walls.clear();
    bool ok = true;
    std::vector<int> needed{key.id};
    for (const auto& part : floor.partitions)
      if (part.id != key.id && part.bounds.overlaps(span)) needed.push_back(part.id);
    for (int id : needed) {
      auto res = cache.fetch({key.floor, id}, occ);
      if (res.evicted) {
        evicted[*res.evicted] = true;
        if (*res.evicted == key) ok = false;
      }
      held.push_back(res.partition);
    }
    if (!ok) {
      // The group's own partition was pushed out while loading its neighbours.
      for (auto i : *members) cloud.particles[i].weight = 0.0;
      out.evicted += members->size();
      continue;
    }
    for (const auto& part : held)
      for (const auto& w : part->walls)
        if (w.bbox.overlaps(span)) walls.push_back(&w);

    for (auto i : *members) {
      auto& p = cloud.particles[i];
      const map::Segment disp{p.start, p.position()};
      if (disp.a == disp.b) continue;
      const auto v = map::collision_query(disp, walls, policy, &out.stats);
      if (v.kind == map::CollisionVerdict::Kind::Kill) {
        p.weight = 0.0;
        ++out.killed;
        continue;
      }
      if (v.kind == map::CollisionVerdict::Kind::Corrected) {
        p.x = v.new_disp.b.x;
        p.y = v.new_disp.b.y;
        ++out.corrected;
      }
      if (!map::try_locate(p.position(), floor)) {
        p.weight = 0.0;
        ++out.out_of_map;
      }
    }
  }

  if (!normalize(cloud) && weight_sum_of(weights) > 0.0) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      auto& p = cloud.particles[i];
      p.x = p.start.x;
      p.y = p.start.y;
      p.weight = weights[i];
    }
    normalize(cloud);
    out.rejected = true;
  }
  return out;
}

}  // namespace flp::filter
