#pragma once

#include <memory>
#include <vector>

#include "flp/map/map_io.hpp"

namespace flp::test {

using map::Point2;

inline std::vector<map::Wall> box_walls(double x0, double y0, double x1, double y1) {
  return {map::Wall({x0, y0}, {x1, y0}), map::Wall({x1, y0}, {x1, y1}), map::Wall({x1, y1}, {x0, y1}),
          map::Wall({x0, y1}, {x0, y0})};
}

inline map::Zone box_zone(int id, map::ZoneKind kind, double x0, double y0, double x1, double y1) {
  map::Zone z;
  z.id = id;
  z.kind = kind;
  z.polygon = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  z.refresh_bbox();
  return z;
}

/// Single-floor map from raw walls.
inline std::shared_ptr<const map::MapModel> single_floor(std::vector<map::Wall> walls, std::vector<map::Zone> zones = {},
                                                         std::vector<map::Beacon> beacons = {}) {
  map::MapModel m;
  m.floors.push_back(map::make_floor(0, 0.0, std::move(walls), std::move(zones), std::move(beacons)));
  m.finalize();
  return std::make_shared<const map::MapModel>(std::move(m));
}

/// Wall-free floor: a single partition with explicit bounds and no walls.
inline std::shared_ptr<const map::MapModel> open_floor(double x0, double y0, double x1, double y1,
                                                       std::vector<map::Zone> zones = {},
                                                       std::vector<map::Beacon> beacons = {}) {
  map::MapModel m;
  map::Floor f;
  f.index = 0;
  map::Partition p;
  p.id = 0;
  p.bounds = map::AxisBox::around({x0, y0}, {x1, y1});
  for (const auto& z : zones) p.zones.push_back(z.id);
  f.partitions.push_back(p);
  f.zones = std::move(zones);
  f.beacons = std::move(beacons);
  m.floors.push_back(std::move(f));
  m.finalize();
  return std::make_shared<const map::MapModel>(std::move(m));
}

}  // namespace flp::test
