#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flp/map/geometry.hpp"

namespace flp::map {

/// Wall segment with its bounding box cached for broad-phase tests.
struct Wall {
  Segment seg;
  AxisBox bbox;

  Wall() = default;
  Wall(Point2 a, Point2 b) : seg{a, b}, bbox(AxisBox::around(a, b)) {}
};

enum class ZoneKind { Stairway, HighAccessibility, GnssDenied };

std::string_view to_string(ZoneKind kind) noexcept;
std::optional<ZoneKind> zone_kind_from_string(std::string_view s) noexcept;

struct Zone {
  int id = 0;
  ZoneKind kind = ZoneKind::HighAccessibility;
  std::vector<Point2> polygon;  // implicitly closed
  double stairway_step_length = 0.0;   // Stairway only
  std::vector<Point2> exit_points;     // Stairway only
  double weight_factor = 1.0;          // HighAccessibility only
  AxisBox bbox = AxisBox::empty();

  void refresh_bbox();
  bool contains(Point2 p) const noexcept;
};

/// Signed shoelace area.
double polygon_area(std::span<const Point2> polygon) noexcept;
/// No two non-adjacent edges touch.
bool polygon_is_simple(std::span<const Point2> polygon) noexcept;

enum class BeaconKind { WiFi, BLE };

struct Beacon {
  std::string id;
  Point2 position;
  int floor = 0;
  BeaconKind kind = BeaconKind::BLE;
};

struct Partition {
  int id = 0;
  AxisBox bounds;
  std::vector<Wall> walls;
  std::vector<int> zones;  // ids into Floor::zones
};

struct Floor {
  int index = 0;
  double height = 0.0;  // absolute elevation of the floor slab, meters
  std::vector<Partition> partitions;  // sorted by id
  std::vector<Beacon> beacons;
  std::vector<Zone> zones;            // all zones of the floor, indexed by Zone::id

  AxisBox bounds() const noexcept;
  const Zone* zone_at(Point2 p, ZoneKind kind) const noexcept;
  std::vector<const Zone*> stairway_zones() const;
  const Partition* partition(int id) const noexcept;
  std::size_t wall_count() const noexcept;
};

struct MapModel {
  std::string name;
  std::string crs_note;
  std::vector<Floor> floors;  // floors[i].index == i

  const Floor& floor(int index) const;
  bool has_floor(int index) const noexcept { return index >= 0 && index < static_cast<int>(floors.size()); }
  const Beacon* find_beacon(std::string_view id) const noexcept;
  std::vector<double> floor_heights() const;

  /// Receives the JSON pointer of the offending element; must throw.
  using Rejector = std::function<void(const std::string& pointer, const std::string& what)>;

  /// Checks every structural invariant and rebuilds the beacon index.
  /// Throws Error(InvalidMap) "pointer: what" for the first violation, or
  /// defers to reject when given.
  void finalize(const Rejector& reject = {});

 private:
  std::unordered_map<std::string, std::pair<int, std::size_t>> beacon_index_;
};

/// Partition containing p (closed bounds, lowest id wins). Throws OutOfMap.
int locate(Point2 p, const Floor& floor);
/// Non-throwing variant.
std::optional<int> try_locate(Point2 p, const Floor& floor) noexcept;

}  // namespace flp::map
