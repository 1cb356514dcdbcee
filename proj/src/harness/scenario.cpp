#include "flp/harness/scenario.hpp"

#include <cmath>
#include <filesystem>

#include "flp/common/angles.hpp"
#include "flp/common/error.hpp"
#include "flp/map/located_json.hpp"
#include "flp/map/map_io.hpp"

namespace flp::harness {

using nlohmann::json;

void validate_scenario(const Scenario& s) {
  if (!s.map) fail(ErrorCode::InvalidArgument, "scenario '" + s.name + "' has no map");
  check_waypoints(s.waypoints);
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::InvalidArgument, "scenario '" + s.name + "': " + what);
  };
  require(s.user_height >= 1.0 && s.user_height <= 2.3, "user_height must lie in [1.0, 2.3] m");
  require(s.step_scale > -0.5 && s.step_scale < 0.5, "step_scale must lie in (-0.5, 0.5)");
  require(s.beacon_noise_sigma >= 0.0, "beacon_noise_sigma must be >= 0");
  require(s.rss_rate > 0.0 && s.gnss_rate > 0.0 && s.pressure_rate > 0.0, "rates must be positive");
  require(s.gnss_sigma > 0.0, "gnss sigma must be positive");
  require(s.imu_rate >= 20.0, "imu_rate must be >= 20 Hz");
  require(s.dpc_duration > 0.0, "dpc_duration must be positive");
  for (std::size_t i = 1; i < s.device_schedule.size(); ++i)
    require(s.device_schedule[i].t > s.device_schedule[i - 1].t + s.dpc_duration,
            "device changes must not overlap");
  for (const auto& w : s.gnss_windows) require(w.t1 >= w.t0, "gnss window end precedes its start");

  for (std::size_t i = 0; i < s.waypoints.size(); ++i) {
    const auto& w = s.waypoints[i];
    if (!s.map->has_floor(w.floor))
      fail(ErrorCode::InvalidArgument, "scenario '" + s.name + "': waypoint " + std::to_string(i) + " on unknown floor");
    if (!map::try_locate(w.position, s.map->floor(w.floor)))
      fail(ErrorCode::InvalidArgument, "scenario '" + s.name + "': waypoint " + std::to_string(i) + " outside the map");
  }
  for (std::size_t i = 1; i < s.waypoints.size(); ++i) {
    const auto& a = s.waypoints[i - 1];
    const auto& b = s.waypoints[i];
    if (a.position == b.position) continue;
    const map::Segment leg{a.position, b.position};
    for (int f : {a.floor, b.floor}) {
      for (const auto& part : s.map->floor(f).partitions)
        for (const auto& wall : part.walls)
          if (wall.bbox.overlaps(leg.bbox()) && map::segment_intersect(leg, wall.seg))
            fail(ErrorCode::InfeasibleScenario,
                 "scenario '" + s.name + "': leg " + std::to_string(i) + " crosses a wall on floor " + std::to_string(f));
      if (a.floor == b.floor) break;
    }
    if (a.floor != b.floor && s.map->floor(b.floor).stairway_zones().empty())
      fail(ErrorCode::InfeasibleScenario, "scenario '" + s.name + "': floor change without a stairway");
  }
}

namespace {

class ScenarioReader {
 public:
  explicit ScenarioReader(const LocatedJson& doc) : doc_(doc) {}

  double number(const json& obj, const std::string& ptr, const char* key, double def) const {
    if (!obj.contains(key)) return def;
    const json& v = obj[key];
    if (!v.is_number()) doc_.reject(ptr + "/" + key, "expected a number", ErrorCode::InvalidArgument);
    return v.get<double>();
  }

  bool boolean(const json& obj, const std::string& ptr, const char* key, bool def) const {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_boolean()) doc_.reject(ptr + "/" + key, "expected true or false", ErrorCode::InvalidArgument);
    return obj[key].get<bool>();
  }

  std::vector<std::vector<double>> rows(const json& obj, const char* key, std::size_t width) const {
    std::vector<std::vector<double>> out;
    if (!obj.contains(key)) return out;
    const std::string ptr = std::string("/") + key;
    if (!obj[key].is_array()) doc_.reject(ptr, "expected an array", ErrorCode::InvalidArgument);
    for (std::size_t i = 0; i < obj[key].size(); ++i) {
      const json& row = obj[key][i];
      const std::string rp = ptr + "/" + std::to_string(i);
      if (!row.is_array() || row.size() != width)
        doc_.reject(rp, "expected " + std::to_string(width) + " numbers", ErrorCode::InvalidArgument);
      std::vector<double> r;
      for (std::size_t k = 0; k < width; ++k) {
        if (!row[k].is_number()) doc_.reject(rp + "/" + std::to_string(k), "expected a number", ErrorCode::InvalidArgument);
        r.push_back(row[k].get<double>());
      }
      out.push_back(std::move(r));
    }
    return out;
  }

  [[noreturn]] void reject(const std::string& ptr, const std::string& what) const {
    doc_.reject(ptr, what, ErrorCode::InvalidArgument);
  }

 private:
  const LocatedJson& doc_;
};

}  // namespace

namespace {

Scenario parse_document(const LocatedJson& doc, const std::string& base_dir,
                        std::shared_ptr<const map::MapModel> preloaded) {
  const std::string& source_name = doc.source();
  const ScenarioReader rd(doc);
  const json& root = doc.root();
  if (!root.is_object()) rd.reject("", "scenario must be an object");

  Scenario s;
  s.name = root.value("name", std::filesystem::path(source_name).stem().string());
  if (preloaded) {
    s.map = std::move(preloaded);
  } else if (!root.contains("map")) {
    rd.reject("", "missing required field 'map'");
  } else if (root["map"].is_string()) {
    const auto path = std::filesystem::path(base_dir) / root["map"].get<std::string>();
    s.map = std::make_shared<const map::MapModel>(map::load_map(path.string()));
  } else {
    s.map = std::make_shared<const map::MapModel>(map::parse_map(root["map"].dump(), source_name + "#/map"));
  }

  if (!root.contains("waypoints")) rd.reject("", "missing required field 'waypoints'");
  for (const auto& r : rd.rows(root, "waypoints", 4)) {
    if (r[3] != std::floor(r[3])) rd.reject("/waypoints", "floor index must be an integer");
    s.waypoints.push_back({r[0], {r[1], r[2]}, static_cast<int>(r[3])});
  }
  s.user_height = rd.number(root, "", "user_height", s.user_height);
  s.step_scale = rd.number(root, "", "step_scale", s.step_scale);
  s.initial_ma = deg2rad(rd.number(root, "", "initial_ma_deg", rad2deg(s.initial_ma)));
  for (const auto& r : rd.rows(root, "device_schedule", 2)) s.device_schedule.push_back({r[0], deg2rad(r[1])});
  s.dpc_duration = rd.number(root, "", "dpc_duration", s.dpc_duration);
  s.beacon_noise_sigma = rd.number(root, "", "beacon_noise_sigma", s.beacon_noise_sigma);
  s.rss_rate = rd.number(root, "", "rss_rate", s.rss_rate);
  s.rss_sensitivity = rd.number(root, "", "rss_sensitivity", s.rss_sensitivity);
  s.cross_floor_leakage = rd.boolean(root, "", "cross_floor_leakage", s.cross_floor_leakage);
  if (root.contains("gnss")) {
    const json& g = root["gnss"];
    for (const auto& r : rd.rows(g, "windows", 2)) s.gnss_windows.push_back({r[0], r[1]});
    s.gnss_sigma = rd.number(g, "/gnss", "sigma", s.gnss_sigma);
    s.gnss_rate = rd.number(g, "/gnss", "rate", s.gnss_rate);
  }
  s.seed = static_cast<std::uint32_t>(rd.number(root, "", "seed", s.seed));
  if (root.contains("prior")) {
    const json& p = root["prior"];
    const std::string kind = p.value("kind", std::string("known_position"));
    if (kind == "known_pose")
      s.prior = PriorKind::KnownPose;
    else if (kind == "known_position")
      s.prior = PriorKind::KnownPosition;
    else if (kind == "global")
      s.prior = PriorKind::Global;
    else
      rd.reject("/prior/kind", "prior kind must be known_pose, known_position or global");
    s.prior_sigma = rd.number(p, "/prior", "sigma", s.prior_sigma);
  }
  if (root.contains("pdr_source")) {
    const std::string src = root["pdr_source"].is_string() ? root["pdr_source"].get<std::string>() : "";
    if (src == "steps")
      s.pdr_source = PdrSource::Steps;
    else if (src == "imu")
      s.pdr_source = PdrSource::Imu;
    else
      rd.reject("/pdr_source", "pdr_source must be 'steps' or 'imu'");
  }
  s.imu_rate = rd.number(root, "", "imu_rate", s.imu_rate);
  s.pressure_rate = rd.number(root, "", "pressure_rate", s.pressure_rate);
  if (root.contains("noise")) {
    const json& n = root["noise"];
    s.noise.heading_per_step = deg2rad(rd.number(n, "/noise", "heading_per_step_deg", 0.0));
    s.noise.step_length_fraction = rd.number(n, "/noise", "step_length_fraction", 0.0);
    s.noise.gyro_bias = deg2rad(rd.number(n, "/noise", "gyro_bias_dps", 0.0));
    s.noise.gyro_noise = rd.number(n, "/noise", "gyro_noise", s.noise.gyro_noise);
    s.noise.accel_noise = rd.number(n, "/noise", "accel_noise", s.noise.accel_noise);
    s.noise.pressure_noise = rd.number(n, "/noise", "pressure_noise", s.noise.pressure_noise);
    s.noise.pressure_drift = rd.number(n, "/noise", "pressure_drift", s.noise.pressure_drift);
  }
  if (root.contains("config")) {
    if (!root["config"].is_object()) rd.reject("/config", "expected an object of filter settings");
    s.config_overrides = root["config"];
  }
  validate_scenario(s);
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source_name, const std::string& base_dir,
                        std::shared_ptr<const map::MapModel> preloaded) {
  return parse_document(LocatedJson::parse(text, source_name), base_dir, std::move(preloaded));
}

Scenario load_scenario(const std::string& path, std::shared_ptr<const map::MapModel> preloaded) {
  const auto base = std::filesystem::path(path).parent_path().string();
  return parse_document(LocatedJson::load(path), base, std::move(preloaded));
}

json scenario_to_json(const Scenario& s, const std::string& map_ref) {
  json j;
  j["name"] = s.name;
  j["map"] = map_ref;
  j["seed"] = s.seed;
  j["user_height"] = s.user_height;
  j["step_scale"] = s.step_scale;
  j["initial_ma_deg"] = rad2deg(s.initial_ma);
  json wps = json::array();
  for (const auto& w : s.waypoints) wps.push_back({w.t, w.position.x, w.position.y, w.floor});
  j["waypoints"] = wps;
  json dev = json::array();
  for (const auto& d : s.device_schedule) dev.push_back({d.t, rad2deg(d.delta)});
  j["device_schedule"] = dev;
  j["dpc_duration"] = s.dpc_duration;
  j["beacon_noise_sigma"] = s.beacon_noise_sigma;
  j["rss_rate"] = s.rss_rate;
  j["rss_sensitivity"] = s.rss_sensitivity;
  j["cross_floor_leakage"] = s.cross_floor_leakage;
  json win = json::array();
  for (const auto& w : s.gnss_windows) win.push_back({w.t0, w.t1});
  j["gnss"] = {{"windows", win}, {"sigma", s.gnss_sigma}, {"rate", s.gnss_rate}};
  const char* prior = s.prior == PriorKind::KnownPose ? "known_pose"
                      : s.prior == PriorKind::KnownPosition ? "known_position"
                                                            : "global";
  j["prior"] = {{"kind", prior}, {"sigma", s.prior_sigma}};
  j["pdr_source"] = s.pdr_source == PdrSource::Imu ? "imu" : "steps";
  j["imu_rate"] = s.imu_rate;
  j["pressure_rate"] = s.pressure_rate;
  j["noise"] = {{"heading_per_step_deg", rad2deg(s.noise.heading_per_step)},
                {"step_length_fraction", s.noise.step_length_fraction},
                {"gyro_bias_dps", rad2deg(s.noise.gyro_bias)},
                {"gyro_noise", s.noise.gyro_noise},
                {"accel_noise", s.noise.accel_noise},
                {"pressure_noise", s.noise.pressure_noise},
                {"pressure_drift", s.noise.pressure_drift}};
  j["config"] = s.config_overrides;
  return j;
}

double initial_user_heading(const Scenario& s) {
  for (std::size_t i = 1; i < s.waypoints.size(); ++i) {
    const Point2 d = s.waypoints[i].position - s.waypoints[0].position;
    if (d.norm() > 1e-9) return std::atan2(d.y, d.x);
  }
  return 0.0;
}

double truth_beta(const Scenario& s, double t) {
  double ma = s.initial_ma;
  for (const auto& d : s.device_schedule)
    if (t >= d.t + s.dpc_duration) ma += d.delta;
  // The engine's relative heading starts at zero, so its beta absorbs the initial device heading.
  return wrap_two_pi(ma - s.initial_ma + initial_user_heading(s));
}

filter::Prior make_prior(const Scenario& s) {
  const auto& w0 = s.waypoints.front();
  switch (s.prior) {
    case PriorKind::KnownPose: {
      filter::KnownPose p;
      p.position = w0.position;
      p.floor = w0.floor;
      p.beta = truth_beta(s, w0.t);
      p.sigma = s.prior_sigma;
      p.epsilon = 0.0;
      return p;
    }
    case PriorKind::KnownPosition:
      return filter::KnownPosition{w0.position, w0.floor, s.prior_sigma};
    case PriorKind::Global:
      break;
  }
  return filter::Global{w0.floor};
}

filter::FilterConfig effective_config(const Scenario& s, const filter::FilterConfig& base) {
  if (s.config_overrides.empty()) return base;
  std::string text = filter::to_config_text(base);
  for (const auto& [key, value] : s.config_overrides.items())
    text += key + " = " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  return filter::parse_config(text, "scenario '" + s.name + "' config");
}

}  // namespace flp::harness
