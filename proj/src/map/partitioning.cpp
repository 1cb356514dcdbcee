#include "flp/map/partitioning.hpp"

#include <string>

#include "flp/common/error.hpp"

namespace flp::map {

namespace {

struct Builder {
  std::span<const Wall> walls;
  std::span<const Zone> zones;
  const PartitioningOptions& opt;
  std::vector<Partition> out;

  void emit(const AxisBox& box, const std::vector<std::size_t>& idx) {
    Partition p;
    p.id = static_cast<int>(out.size());
    p.bounds = box;
    p.walls.reserve(idx.size());
    for (std::size_t i : idx) p.walls.push_back(walls[i]);
    for (const auto& z : zones)
      if (z.bbox.overlaps(box)) p.zones.push_back(z.id);
    out.push_back(std::move(p));
  }

  void split(const AxisBox& box, const std::vector<std::size_t>& idx, int depth) {
    const bool too_many = idx.size() > opt.max_walls;
    const bool too_big = box.area() > opt.target_area && box.area() / 2.0 >= opt.min_area;
    if (!too_many && !too_big) {
      emit(box, idx);
      return;
    }
    if (depth >= opt.max_depth) {
      if (too_many)
        fail(ErrorCode::SinglePointOverflow,
             std::to_string(idx.size()) + " walls cannot be separated below " + std::to_string(opt.max_walls) +
                 " per partition (they share a single point)");
      emit(box, idx);
      return;
    }
    AxisBox lo = box;
    AxisBox hi = box;
    if (box.width() >= box.height()) {
      const double mid = 0.5 * (box.min.x + box.max.x);
      lo.max.x = mid;
      hi.min.x = mid;
    } else {
      const double mid = 0.5 * (box.min.y + box.max.y);
      lo.max.y = mid;
      hi.min.y = mid;
    }
    std::vector<std::size_t> lo_idx;
    std::vector<std::size_t> hi_idx;
    for (std::size_t i : idx) {
      if (segment_touches_box(walls[i].seg, lo)) lo_idx.push_back(i);
      if (segment_touches_box(walls[i].seg, hi)) hi_idx.push_back(i);
    }
    split(lo, lo_idx, depth + 1);
    split(hi, hi_idx, depth + 1);
  }
};

}  // namespace

std::vector<Partition> compile_partitions(std::span<const Wall> walls, std::span<const Zone> zones,
                                          const PartitioningOptions& options) {
  if (options.max_walls < 1) fail(ErrorCode::InvalidArgument, "max_walls must be >= 1");

  AxisBox box = AxisBox::empty();
  for (const auto& w : walls) box.expand(w.bbox);
  for (const auto& z : zones) box.expand(z.bbox);
  if (box.is_empty()) box = {{0.0, 0.0}, {0.0, 0.0}};
  box = box.inflated(options.margin);

  std::vector<std::size_t> idx(walls.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  Builder b{walls, zones, options, {}};
  b.split(box, idx, 0);
  return std::move(b.out);
}

}  // namespace flp::map
