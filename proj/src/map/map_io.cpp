#include "flp/map/map_io.hpp"

#include <fstream>

#include "flp/common/error.hpp"
#include "flp/map/located_json.hpp"

namespace flp::map {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(const LocatedJson& doc) : doc_(doc) {}

  const json& at(const json& obj, const std::string& ptr, const char* key) const {
    if (!obj.is_object()) doc_.reject(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) doc_.reject(ptr, std::string("missing required field '") + key + "'");
    return *it;
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) doc_.reject(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) doc_.reject(ptr, "number is not finite");
    return d;
  }

  int integer(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer()) doc_.reject(ptr, "expected an integer");
    return v.get<int>();
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) doc_.reject(ptr, "expected a string");
    return v.get<std::string>();
  }

  const json& array(const json& v, const std::string& ptr) const {
    if (!v.is_array()) doc_.reject(ptr, "expected an array");
    return v;
  }

  Point2 point(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.size() != 2) doc_.reject(ptr, "expected a point [x, y]");
    return {number(v[0], ptr + "/0"), number(v[1], ptr + "/1")};
  }

  std::vector<Point2> points(const json& v, const std::string& ptr) const {
    std::vector<Point2> out;
    const json& arr = array(v, ptr);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(point(arr[i], ptr + "/" + std::to_string(i)));
    return out;
  }

  Wall wall(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.size() != 2) doc_.reject(ptr, "expected a wall [[x1, y1], [x2, y2]]");
    const Point2 a = point(v[0], ptr + "/0");
    const Point2 b = point(v[1], ptr + "/1");
    if (a == b) doc_.reject(ptr, "wall has zero length");
    return Wall(a, b);
  }

  std::vector<Wall> walls(const json& v, const std::string& ptr) const {
    std::vector<Wall> out;
    const json& arr = array(v, ptr);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(wall(arr[i], ptr + "/" + std::to_string(i)));
    return out;
  }

  Zone zone(const json& v, const std::string& ptr, int id) const {
    Zone z;
    z.id = id;
    const std::string kind = string(at(v, ptr, "kind"), ptr + "/kind");
    auto k = zone_kind_from_string(kind);
    if (!k) doc_.reject(ptr + "/kind", "unknown zone kind '" + kind + "'");
    z.kind = *k;
    z.polygon = points(at(v, ptr, "polygon"), ptr + "/polygon");
    if (z.kind == ZoneKind::Stairway) {
      z.stairway_step_length = number(at(v, ptr, "step_length"), ptr + "/step_length");
      z.exit_points = points(at(v, ptr, "exits"), ptr + "/exits");
    } else if (v.contains("step_length") || v.contains("exits")) {
      doc_.reject(ptr, "step_length/exits are only allowed on stairway zones");
    }
    if (z.kind == ZoneKind::HighAccessibility) {
      if (v.contains("weight_factor")) z.weight_factor = number(v["weight_factor"], ptr + "/weight_factor");
    } else if (v.contains("weight_factor")) {
      doc_.reject(ptr, "weight_factor is only allowed on high_accessibility zones");
    }
    z.refresh_bbox();
    return z;
  }

  Beacon beacon(const json& v, const std::string& ptr, int floor) const {
    Beacon b;
    b.id = string(at(v, ptr, "id"), ptr + "/id");
    b.position = point(at(v, ptr, "position"), ptr + "/position");
    b.floor = floor;
    const std::string kind = v.contains("kind") ? string(v["kind"], ptr + "/kind") : "ble";
    if (kind == "wifi") {
      b.kind = BeaconKind::WiFi;
    } else if (kind == "ble") {
      b.kind = BeaconKind::BLE;
    } else {
      doc_.reject(ptr + "/kind", "beacon kind must be 'wifi' or 'ble'");
    }
    return b;
  }

 private:
  const LocatedJson& doc_;
};

MapModel parse_document(const LocatedJson& doc) {
  const Reader rd(doc);
  const json& root = doc.root();
  if (!root.is_object()) doc.reject("", "map document must be an object");

  MapModel map;
  map.name = root.value("name", std::string{});
  map.crs_note = root.value("crs", std::string{});

  PartitioningOptions popt;
  if (root.contains("partitioning")) {
    const json& p = root["partitioning"];
    if (p.contains("max_walls")) {
      const int mw = rd.integer(p["max_walls"], "/partitioning/max_walls");
      if (mw < 1) doc.reject("/partitioning/max_walls", "max_walls must be >= 1");
      popt.max_walls = static_cast<std::size_t>(mw);
    }
    if (p.contains("target_area")) popt.target_area = rd.number(p["target_area"], "/partitioning/target_area");
  }

  const json& floors = rd.array(rd.at(root, "", "floors"), "/floors");
  for (std::size_t fi = 0; fi < floors.size(); ++fi) {
    const std::string fp = "/floors/" + std::to_string(fi);
    const json& fj = floors[fi];
    const int index = fj.contains("index") ? rd.integer(fj["index"], fp + "/index") : static_cast<int>(fi);
    const double height = rd.number(rd.at(fj, fp, "height"), fp + "/height");

    std::vector<Zone> zones;
    if (fj.contains("zones")) {
      const json& zs = rd.array(fj["zones"], fp + "/zones");
      for (std::size_t zi = 0; zi < zs.size(); ++zi)
        zones.push_back(rd.zone(zs[zi], fp + "/zones/" + std::to_string(zi), static_cast<int>(zi)));
    }
    std::vector<Beacon> beacons;
    if (fj.contains("beacons")) {
      const json& bs = rd.array(fj["beacons"], fp + "/beacons");
      for (std::size_t bi = 0; bi < bs.size(); ++bi)
        beacons.push_back(rd.beacon(bs[bi], fp + "/beacons/" + std::to_string(bi), index));
    }

    const bool has_walls = fj.contains("walls");
    const bool has_parts = fj.contains("partitions");
    if (has_walls == has_parts) doc.reject(fp, "a floor needs exactly one of 'walls' or 'partitions'");

    Floor floor;
    if (has_walls) {
      try {
        floor = make_floor(index, height, rd.walls(fj["walls"], fp + "/walls"), std::move(zones), std::move(beacons),
                           popt);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SinglePointOverflow) throw;
        doc.reject(fp + "/walls", e.what(), ErrorCode::SinglePointOverflow);
      }
    } else {
      floor.index = index;
      floor.height = height;
      floor.zones = std::move(zones);
      floor.beacons = std::move(beacons);
      const json& ps = rd.array(fj["partitions"], fp + "/partitions");
      for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        const std::string pp = fp + "/partitions/" + std::to_string(pi);
        Partition part;
        part.id = rd.integer(rd.at(ps[pi], pp, "id"), pp + "/id");
        const json& b = rd.at(ps[pi], pp, "bounds");
        if (!b.is_array() || b.size() != 2) doc.reject(pp + "/bounds", "expected [[minx, miny], [maxx, maxy]]");
        part.bounds = {rd.point(b[0], pp + "/bounds/0"), rd.point(b[1], pp + "/bounds/1")};
        if (part.bounds.is_empty()) doc.reject(pp + "/bounds", "min must not exceed max");
        part.walls = rd.walls(rd.at(ps[pi], pp, "walls"), pp + "/walls");
        if (part.walls.size() > popt.max_walls)
          doc.reject(pp + "/walls", "partition holds more than " + std::to_string(popt.max_walls) + " walls");
        if (ps[pi].contains("zones")) {
          const json& zr = rd.array(ps[pi]["zones"], pp + "/zones");
          for (std::size_t k = 0; k < zr.size(); ++k)
            part.zones.push_back(rd.integer(zr[k], pp + "/zones/" + std::to_string(k)));
        }
        floor.partitions.push_back(std::move(part));
      }
    }
    map.floors.push_back(std::move(floor));
  }

  map.finalize([&](const std::string& ptr, const std::string& what) { doc.reject(ptr, what); });
  return map;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

}  // namespace

Floor make_floor(int index, double height, std::vector<Wall> walls, std::vector<Zone> zones,
                 std::vector<Beacon> beacons, const PartitioningOptions& options) {
  for (auto& z : zones) z.refresh_bbox();
  Floor f;
  f.index = index;
  f.height = height;
  f.partitions = compile_partitions(walls, zones, options);
  f.zones = std::move(zones);
  f.beacons = std::move(beacons);
  for (auto& b : f.beacons) b.floor = index;
  return f;
}

MapModel parse_map(std::string_view text, const std::string& source_name) {
  return parse_document(LocatedJson::parse(text, source_name));
}

MapModel load_map(const std::string& path) { return parse_document(LocatedJson::load(path)); }

json to_json(const MapModel& map) {
  json root;
  root["name"] = map.name;
  root["crs"] = map.crs_note;
  json floors = json::array();
  for (const auto& f : map.floors) {
    json fj;
    fj["index"] = f.index;
    fj["height"] = f.height;
    json parts = json::array();
    for (const auto& p : f.partitions) {
      json pj;
      pj["id"] = p.id;
      pj["bounds"] = json::array({point_json(p.bounds.min), point_json(p.bounds.max)});
      json walls = json::array();
      for (const auto& w : p.walls) walls.push_back(json::array({point_json(w.seg.a), point_json(w.seg.b)}));
      pj["walls"] = std::move(walls);
      pj["zones"] = p.zones;
      parts.push_back(std::move(pj));
    }
    fj["partitions"] = std::move(parts);
    json zones = json::array();
    for (const auto& z : f.zones) {
      json zj;
      zj["kind"] = std::string(to_string(z.kind));
      json poly = json::array();
      for (const auto& p : z.polygon) poly.push_back(point_json(p));
      zj["polygon"] = std::move(poly);
      if (z.kind == ZoneKind::Stairway) {
        zj["step_length"] = z.stairway_step_length;
        json exits = json::array();
        for (const auto& e : z.exit_points) exits.push_back(point_json(e));
        zj["exits"] = std::move(exits);
      }
      if (z.kind == ZoneKind::HighAccessibility) zj["weight_factor"] = z.weight_factor;
      zones.push_back(std::move(zj));
    }
    fj["zones"] = std::move(zones);
    json beacons = json::array();
    for (const auto& b : f.beacons) {
      json bj;
      bj["id"] = b.id;
      bj["position"] = point_json(b.position);
      bj["kind"] = b.kind == BeaconKind::WiFi ? "wifi" : "ble";
      beacons.push_back(std::move(bj));
    }
    fj["beacons"] = std::move(beacons);
    floors.push_back(std::move(fj));
  }
  root["floors"] = std::move(floors);
  return root;
}

void save_map(const MapModel& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << to_json(map).dump(1) << '\n';
}

}  // namespace flp::map
