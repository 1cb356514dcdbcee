#include "flp/harness/builtin_suite.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "flp/common/error.hpp"
#include "flp/map/map_io.hpp"

namespace flp::harness {

namespace {

using map::Point2;
using map::Wall;
using map::Zone;
using map::ZoneKind;

constexpr double kDeg = std::numbers::pi / 180.0;

struct WallSet {
  std::vector<Wall> walls;

  void line(Point2 a, Point2 b) { walls.emplace_back(a, b); }
  void rect(double x0, double y0, double x1, double y1) {
    line({x0, y0}, {x1, y0});
    line({x1, y0}, {x1, y1});
    line({x1, y1}, {x0, y1});
    line({x0, y1}, {x0, y0});
  }
  // Horizontal wall at y from x0 to x1 with door gaps [lo, hi].
  void hline(double y, double x0, double x1, std::vector<std::pair<double, double>> gaps = {}) {
    std::sort(gaps.begin(), gaps.end());
    double x = x0;
    for (const auto& [lo, hi] : gaps) {
      if (lo > x) line({x, y}, {lo, y});
      x = hi;
    }
    if (x < x1) line({x, y}, {x1, y});
  }
};

Zone rect_zone(int id, ZoneKind kind, double x0, double y0, double x1, double y1) {
  Zone z;
  z.id = id;
  z.kind = kind;
  z.polygon = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  z.refresh_bbox();
  return z;
}

map::Beacon beacon(std::string id, Point2 p, int floor) {
  return {std::move(id), p, floor, map::BeaconKind::BLE};
}

class PathBuilder {
 public:
  PathBuilder(Point2 start, int floor) { wps_.push_back({0.0, start, floor}); }

  PathBuilder& to(Point2 p, double speed, std::optional<int> floor = std::nullopt) {
    const Waypoint& last = wps_.back();
    const double d = map::distance(last.position, p);
    if (d == 0.0 && !floor) return *this;
    wps_.push_back({last.t + d / speed, p, floor.value_or(last.floor)});
    return *this;
  }
  PathBuilder& dwell(double seconds) {
    const Waypoint last = wps_.back();
    wps_.push_back({last.t + seconds, last.position, last.floor});
    return *this;
  }
  double t() const { return wps_.back().t; }
  std::vector<Waypoint> take() { return std::move(wps_); }

 private:
  std::vector<Waypoint> wps_;
};

std::shared_ptr<const map::MapModel> finish(map::MapModel m) {
  m.finalize();
  return std::make_shared<const map::MapModel>(std::move(m));
}

}  // namespace

std::shared_ptr<const map::MapModel> corridor_map() {
  WallSet w;
  w.hline(0.0, 0.0, 60.0);
  w.hline(2.5, 0.0, 60.0, {{45.0, 47.5}});
  w.line({0.0, 0.0}, {0.0, 2.5});
  w.line({60.0, 0.0}, {60.0, 2.5});
  w.line({45.0, 2.5}, {45.0, 42.5});
  w.line({47.5, 2.5}, {47.5, 42.5});
  w.line({45.0, 42.5}, {47.5, 42.5});
  map::MapModel m;
  m.name = "corridor";
  m.floors.push_back(map::make_floor(0, 0.0, std::move(w.walls), {}, {}));
  return finish(std::move(m));
}

Scenario corridor_scenario(std::uint32_t seed, bool dpc) {
  Scenario s;
  s.name = dpc ? "corridor_dpc" : "corridor";
  s.map = corridor_map();
  PathBuilder path({30.0, 1.25}, 0);
  path.to({46.25, 1.25}, 1.2);
  const double turn = path.t();
  path.to({46.25, 41.0}, 1.2);
  s.waypoints = path.take();
  s.seed = seed;
  s.step_scale = 0.03;
  s.initial_ma = 20.0 * kDeg;
  if (dpc) s.device_schedule.push_back({turn + 8.0, 90.0 * kDeg});
  s.prior = PriorKind::KnownPosition;
  s.prior_sigma = 0.5;
  s.noise.heading_per_step = 0.3 * kDeg;
  s.noise.step_length_fraction = 0.05;
  s.config_overrides = {{"n_clusters", 2}};
  return s;
}

std::shared_ptr<const map::MapModel> office_map() {
  WallSet w;
  w.rect(0.0, 0.0, 60.0, 20.0);
  std::vector<std::pair<double, double>> doors;
  for (int i = 0; i < 10; ++i) doors.push_back({6.0 * i + 2.4, 6.0 * i + 3.6});
  w.hline(8.5, 0.0, 60.0, doors);
  w.hline(11.5, 0.0, 60.0, doors);
  for (int i = 1; i < 10; ++i) {
    w.line({6.0 * i, 0.0}, {6.0 * i, 8.5});
    w.line({6.0 * i, 11.5}, {6.0 * i, 20.0});
  }
  std::vector<map::Beacon> beacons{beacon("office-b1", {9.0, 10.0}, 0), beacon("office-b2", {24.0, 4.0}, 0),
                                   beacon("office-b3", {39.0, 16.0}, 0), beacon("office-b4", {54.0, 10.0}, 0)};
  map::MapModel m;
  m.name = "office";
  m.floors.push_back(map::make_floor(0, 0.0, std::move(w.walls), {}, std::move(beacons)));
  return finish(std::move(m));
}

Scenario office_scenario(std::uint32_t seed) {
  Scenario s;
  s.name = "office";
  s.map = office_map();
  PathBuilder path({1.5, 10.0}, 0);
  // Room visits in corridor order, then back west; each room gets a short loop.
  const int order[] = {0, 3, 7, 9, 8, 5, 2, 1, 4, 6, 9, 6, 3, 0};
  bool north = true;
  int visit = 0;
  while (path.t() < 600.0) {
    const int room = order[visit % std::size(order)];
    const double xc = 6.0 * room + 3.0;
    const double side = north ? 1.0 : -1.0;
    const double speed = 1.1 + 0.1 * (visit % 3);
    path.to({xc, 10.0}, speed);
    path.to({xc, 10.0 + side * 4.0}, speed);
    path.to({xc - 1.8, 10.0 + side * 7.5}, speed);
    path.to({xc + 1.8, 10.0 + side * 7.5}, speed);
    path.dwell(3.0);
    path.to({xc, 10.0 + side * 4.0}, speed);
    path.to({xc, 10.0}, speed);
    north = !north;
    ++visit;
  }
  s.waypoints = path.take();
  s.seed = seed;
  s.step_scale = 0.04;
  s.initial_ma = 15.0 * kDeg;
  s.device_schedule = {{150.0, 90.0 * kDeg}, {400.0, -90.0 * kDeg}};
  s.prior = PriorKind::KnownPosition;
  s.prior_sigma = 1.0;
  s.noise.heading_per_step = 0.3 * kDeg;
  s.noise.step_length_fraction = 0.05;
  return s;
}

std::shared_ptr<const map::MapModel> two_floor_map() {
  map::MapModel m;
  m.name = "two_floor";
  for (int f = 0; f < 2; ++f) {
    WallSet w;
    w.rect(0.0, 0.0, 30.0, 15.0);
    w.line({10.0, 7.5}, {26.0, 7.5});
    // Stairwell side wall, open at the bottom on the ground floor and at the top upstairs.
    if (f == 0)
      w.line({26.0, 1.5}, {26.0, 7.0});
    else
      w.line({26.0, 0.0}, {26.0, 5.5});
    std::vector<Zone> zones{rect_zone(0, ZoneKind::Stairway, 26.0, 1.0, 30.0, 6.0)};
    zones[0].stairway_step_length = 0.3;
    zones[0].exit_points = {f == 0 ? Point2{28.0, 0.5} : Point2{28.0, 6.5}};
    const double x0 = f == 0 ? 5.0 : 15.0;
    std::vector<map::Beacon> beacons{beacon("f" + std::to_string(f) + "-b1", {x0, 4.0}, f),
                                     beacon("f" + std::to_string(f) + "-b2", {x0 + 10.0, 11.0}, f)};
    m.floors.push_back(map::make_floor(f, 3.6 * f, std::move(w.walls), std::move(zones), std::move(beacons)));
  }
  return finish(std::move(m));
}

Scenario two_floor_scenario(std::uint32_t seed) {
  Scenario s;
  s.name = "two_floor";
  s.map = two_floor_map();
  PathBuilder path({3.0, 3.0}, 0);
  path.to({20.0, 3.0}, 1.2).to({25.0, 0.6}, 1.2).to({28.0, 0.6}, 1.1);
  path.dwell(2.0);
  path.to({28.0, 6.4}, 0.45, 1);
  path.to({28.0, 11.0}, 1.1).to({5.0, 11.0}, 1.2).to({5.0, 3.0}, 1.2).to({9.0, 3.0}, 1.2);
  s.waypoints = path.take();
  s.seed = seed;
  s.step_scale = 0.03;
  s.initial_ma = 10.0 * kDeg;
  s.prior = PriorKind::KnownPosition;
  s.noise.heading_per_step = 0.3 * kDeg;
  s.noise.step_length_fraction = 0.05;
  return s;
}

std::shared_ptr<const map::MapModel> open_hall_map() {
  map::MapModel m;
  m.name = "open_hall";
  {
    WallSet w;
    w.hline(0.0, 0.0, 40.0, {{18.0, 22.0}});  // entrance
    w.line({40.0, 0.0}, {40.0, 40.0});
    w.line({40.0, 40.0}, {0.0, 40.0});
    w.line({0.0, 40.0}, {0.0, 0.0});
    for (double px : {12.0, 28.0})
      for (double py : {12.0, 24.0}) w.rect(px - 0.4, py - 0.4, px + 0.4, py + 0.4);
    std::vector<Zone> zones{rect_zone(0, ZoneKind::GnssDenied, 0.0, 6.0, 40.0, 40.0),
                            rect_zone(1, ZoneKind::HighAccessibility, 17.0, 0.0, 23.0, 30.0)};
    // The factor compounds every epoch, so it stays close to 1.
    zones[1].weight_factor = 1.02;
    std::vector<map::Beacon> beacons{beacon("hall-b1", {8.0, 8.0}, 0), beacon("hall-b2", {32.0, 8.0}, 0),
                                     beacon("hall-b3", {20.0, 20.0}, 0), beacon("hall-b4", {8.0, 30.0}, 0),
                                     beacon("hall-b5", {32.0, 30.0}, 0)};
    m.floors.push_back(map::make_floor(0, 0.0, std::move(w.walls), std::move(zones), std::move(beacons)));
  }
  {
    WallSet w;
    w.rect(0.0, 30.0, 40.0, 40.0);
    std::vector<map::Beacon> beacons{beacon("mezz-b1", {10.0, 35.0}, 1), beacon("mezz-b2", {30.0, 35.0}, 1)};
    m.floors.push_back(map::make_floor(1, 4.5, std::move(w.walls), {}, std::move(beacons)));
  }
  return finish(std::move(m));
}

Scenario open_hall_scenario(std::uint32_t seed) {
  Scenario s;
  s.name = "open_hall";
  s.map = open_hall_map();
  PathBuilder path({20.0, 0.5}, 0);
  path.to({20.0, 6.0}, 1.2).to({20.0, 16.0}, 1.2).to({6.0, 18.0}, 1.2).to({6.0, 34.0}, 1.2);
  path.to({34.0, 34.0}, 1.3).to({34.0, 18.0}, 1.2).to({20.0, 30.0}, 1.1).to({20.0, 6.0}, 1.2);
  path.to({4.0, 4.0}, 1.2).to({36.0, 4.0}, 1.3);
  s.waypoints = path.take();
  s.seed = seed;
  s.step_scale = 0.05;
  s.initial_ma = 0.0;
  s.device_schedule = {{60.0, 90.0 * kDeg}};
  s.cross_floor_leakage = true;
  s.gnss_windows = {{0.0, 6.0}};
  s.prior = PriorKind::KnownPosition;
  s.prior_sigma = 2.0;
  s.noise.heading_per_step = 0.3 * kDeg;
  s.noise.step_length_fraction = 0.05;
  return s;
}

std::vector<Scenario> builtin_suite() {
  return {corridor_scenario(), office_scenario(), two_floor_scenario(), open_hall_scenario()};
}

void export_suite(const std::vector<Scenario>& suite, const std::string& dir) {
  for (const auto& s : suite) {
    const std::filesystem::path sub = std::filesystem::path(dir) / s.name;
    std::filesystem::create_directories(sub);
    map::save_map(*s.map, (sub / "map.json").string());
    std::ofstream out(sub / "scenario.json");
    if (!out) fail(ErrorCode::IoError, "cannot write '" + (sub / "scenario.json").string() + "'");
    out << scenario_to_json(s, "map.json").dump(2) << "\n";
  }
}

std::vector<Scenario> load_suite(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) fail(ErrorCode::IoError, "'" + dir + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto file = entry.path() / "scenario.json";
    if (entry.is_directory() && std::filesystem::exists(file)) files.push_back(file);
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto& f : files) out.push_back(load_scenario(f.string()));
  return out;
}

}  // namespace flp::harness
