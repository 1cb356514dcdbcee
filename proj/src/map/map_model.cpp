#include "flp/map/map_model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "flp/common/error.hpp"

namespace flp::map {

std::string_view to_string(ZoneKind kind) noexcept {
  switch (kind) {
    case ZoneKind::Stairway: return "stairway";
    case ZoneKind::HighAccessibility: return "high_accessibility";
    case ZoneKind::GnssDenied: return "gnss_denied";
  }
  return "?";
}

std::optional<ZoneKind> zone_kind_from_string(std::string_view s) noexcept {
  if (s == "stairway") return ZoneKind::Stairway;
  if (s == "high_accessibility") return ZoneKind::HighAccessibility;
  if (s == "gnss_denied") return ZoneKind::GnssDenied;
  return std::nullopt;
}

void Zone::refresh_bbox() {
  bbox = AxisBox::empty();
  for (const auto& p : polygon) bbox.expand(p);
}

bool Zone::contains(Point2 p) const noexcept {
  if (!bbox.contains(p)) return false;
  // Even-odd ray cast.
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double polygon_area(std::span<const Point2> polygon) noexcept {
  double acc = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) acc += polygon[i].cross(polygon[(i + 1) % n]);
  return 0.5 * acc;
}

bool polygon_is_simple(std::span<const Point2> polygon) noexcept {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Segment e1{polygon[i], polygon[(i + 1) % n]};
    if (e1.length() == 0.0) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const Segment e2{polygon[j], polygon[(j + 1) % n]};
      if (intersect(e1, e2)) return false;
    }
  }
  return true;
}

AxisBox Floor::bounds() const noexcept {
  AxisBox box = AxisBox::empty();
  for (const auto& p : partitions) box.expand(p.bounds);
  return box;
}

const Zone* Floor::zone_at(Point2 p, ZoneKind kind) const noexcept {
  for (const auto& z : zones)
    if (z.kind == kind && z.contains(p)) return &z;
  return nullptr;
}

std::vector<const Zone*> Floor::stairway_zones() const {
  std::vector<const Zone*> out;
  for (const auto& z : zones)
    if (z.kind == ZoneKind::Stairway) out.push_back(&z);
  return out;
}

const Partition* Floor::partition(int id) const noexcept {
  for (const auto& p : partitions)
    if (p.id == id) return &p;
  return nullptr;
}

std::size_t Floor::wall_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : partitions) n += p.walls.size();
  return n;
}

const Floor& MapModel::floor(int index) const {
  if (!has_floor(index)) fail(ErrorCode::UnknownFloor, "no floor with index " + std::to_string(index));
  return floors[static_cast<std::size_t>(index)];
}

const Beacon* MapModel::find_beacon(std::string_view id) const noexcept {
  const auto it = beacon_index_.find(std::string(id));
  if (it == beacon_index_.end()) return nullptr;
  return &floors[static_cast<std::size_t>(it->second.first)].beacons[it->second.second];
}

std::vector<double> MapModel::floor_heights() const {
  std::vector<double> h;
  h.reserve(floors.size());
  for (const auto& f : floors) h.push_back(f.height);
  return h;
}

namespace {

void validate_zone(const Zone& z, const std::string& where, const auto& invalid) {
  if (z.polygon.size() < 3) invalid(where, "zone polygon needs at least 3 vertices");
  for (const auto& p : z.polygon)
    if (!p.finite()) invalid(where, "zone vertex is not finite");
  if (std::abs(polygon_area(z.polygon)) <= 0.0) invalid(where, "zone polygon has zero area");
  if (!polygon_is_simple(z.polygon)) invalid(where, "zone polygon is not simple");
  if (z.kind == ZoneKind::Stairway) {
    if (!(z.stairway_step_length > 0.0)) invalid(where, "stairway zone requires stairway_step_length > 0");
    if (z.exit_points.empty()) invalid(where, "stairway zone requires at least one exit point");
  }
  if (z.kind == ZoneKind::HighAccessibility && !(z.weight_factor >= 0.0))
    invalid(where, "weight_factor must be >= 0");
}

}  // namespace

void MapModel::finalize(const Rejector& reject) {
  const auto invalid = [&](const std::string& where, const std::string& what) {
    if (reject) reject(where, what);
    fail(ErrorCode::InvalidMap, where + ": " + what);
  };
  beacon_index_.clear();
  if (floors.empty()) invalid("/floors", "at least one floor is required");
  for (std::size_t fi = 0; fi < floors.size(); ++fi) {
    Floor& f = floors[fi];
    const std::string fw = "/floors/" + std::to_string(fi);
    if (f.index != static_cast<int>(fi)) invalid(fw, "floor indices must be contiguous from 0");
    if (fi > 0 && !(f.height > floors[fi - 1].height)) invalid(fw, "floor heights must strictly increase");
    if (f.partitions.empty()) invalid(fw, "floor has no partitions");

    for (std::size_t zi = 0; zi < f.zones.size(); ++zi) {
      Zone& z = f.zones[zi];
      if (z.id != static_cast<int>(zi)) invalid(fw + "/zones/" + std::to_string(zi), "zone ids must equal their position");
      z.refresh_bbox();
      validate_zone(z, fw + "/zones/" + std::to_string(zi), invalid);
    }
    std::set<int> ids;
    for (std::size_t pi = 0; pi < f.partitions.size(); ++pi) {
      const Partition& p = f.partitions[pi];
      const std::string pw = fw + "/partitions/" + std::to_string(pi);
      if (!ids.insert(p.id).second) invalid(pw, "duplicate partition id " + std::to_string(p.id));
      if (p.bounds.is_empty()) invalid(pw, "partition bounds are empty");
      for (std::size_t wi = 0; wi < p.walls.size(); ++wi) {
        const Wall& w = p.walls[wi];
        const std::string ww = pw + "/walls/" + std::to_string(wi);
        if (!w.seg.a.finite() || !w.seg.b.finite()) invalid(ww, "wall endpoint is not finite");
        if (w.seg.a == w.seg.b) invalid(ww, "wall has zero length");
        if (!w.bbox.overlaps(p.bounds)) invalid(ww, "wall lies outside its partition bounds");
      }
      for (int zid : p.zones)
        if (zid < 0 || zid >= static_cast<int>(f.zones.size())) invalid(pw, "zone reference out of range");
    }
    for (std::size_t bi = 0; bi < f.beacons.size(); ++bi) {
      Beacon& b = f.beacons[bi];
      const std::string bw = fw + "/beacons/" + std::to_string(bi);
      if (b.id.empty()) invalid(bw, "beacon id is empty");
      if (!b.position.finite()) invalid(bw, "beacon position is not finite");
      b.floor = f.index;
      if (!beacon_index_.emplace(b.id, std::make_pair(f.index, bi)).second)
        invalid(bw, "duplicate beacon id '" + b.id + "'");
    }
    std::sort(f.partitions.begin(), f.partitions.end(),
              [](const Partition& a, const Partition& b) { return a.id < b.id; });
  }
}

std::optional<int> try_locate(Point2 p, const Floor& floor) noexcept {
  for (const auto& part : floor.partitions)
    if (part.bounds.contains(p)) return part.id;
  return std::nullopt;
}

int locate(Point2 p, const Floor& floor) {
  if (auto id = try_locate(p, floor)) return *id;
  std::ostringstream os;
  os << "point (" << p.x << ", " << p.y << ") is outside floor " << floor.index;
  fail(ErrorCode::OutOfMap, os.str());
}

}  // namespace flp::map
