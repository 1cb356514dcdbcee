#include "flp/harness/traces.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "flp/common/error.hpp"

namespace flp::harness {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

template <typename F>
void for_each_record(const std::string& path, F&& f) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      f(json::parse(line));
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

json vec3(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d read_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw json::type_error::create(302, "expected a 3-vector", &j);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double event_time(const pdr::PdrEvent& e) {
  return std::visit([](const auto& v) { return v.t; }, e);
}

}  // namespace

void write_imu_jsonl(const std::string& path, const std::vector<pdr::ImuSample>& samples) {
  auto out = open_out(path);
  for (const auto& s : samples) {
    json j{{"t", s.t}, {"accel", vec3(s.accel)}, {"gyro", vec3(s.gyro)}};
    if (s.pressure) j["pressure"] = *s.pressure;
    out << j.dump() << '\n';
  }
}

std::vector<pdr::ImuSample> read_imu_jsonl(const std::string& path) {
  std::vector<pdr::ImuSample> out;
  for_each_record(path, [&](const json& j) {
    pdr::ImuSample s;
    s.t = j.at("t").get<double>();
    s.accel = read_vec3(j.at("accel"));
    s.gyro = read_vec3(j.at("gyro"));
    if (j.contains("pressure")) s.pressure = j["pressure"].get<double>();
    out.push_back(s);
  });
  return out;
}

void write_measurements_jsonl(const std::string& path, const std::vector<measurements::Measurement>& ms) {
  auto out = open_out(path);
  for (const auto& m : ms) {
    json j;
    if (const auto* g = std::get_if<measurements::GnssFix>(&m))
      j = {{"t", g->t}, {"kind", "gnss"}, {"x", g->position.x}, {"y", g->position.y}, {"sigma", g->sigma}};
    else {
      const auto& r = std::get<measurements::RssObservation>(m);
      j = {{"t", r.t}, {"kind", "rss"}, {"beacon_id", r.beacon_id}, {"rss", r.rss}};
    }
    out << j.dump() << '\n';
  }
}

std::vector<measurements::Measurement> read_measurements_jsonl(const std::string& path) {
  std::vector<measurements::Measurement> out;
  for_each_record(path, [&](const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double t = j.at("t").get<double>();
    if (kind == "gnss") {
      out.emplace_back(measurements::GnssFix{
          t, {j.at("x").get<double>(), j.at("y").get<double>()}, j.value("sigma", measurements::kDefaultGnssSigma)});
    } else if (kind == "rss") {
      const double rss = j.at("rss").get<double>();
      if (rss < -120.0 || rss > 0.0) throw json::other_error::create(501, "rss outside [-120, 0] dBm", &j);
      out.emplace_back(measurements::RssObservation{t, j.at("beacon_id").get<std::string>(), rss});
    } else {
      throw json::other_error::create(501, "unknown measurement kind '" + kind + "'", &j);
    }
  });
  return out;
}

void write_events_jsonl(const std::string& path, const std::vector<pdr::PdrEvent>& events) {
  auto out = open_out(path);
  for (const auto& e : events) {
    json j;
    if (const auto* s = std::get_if<pdr::StepEvent>(&e))
      j = {{"t", s->t}, {"kind", "step"}, {"length", s->length}, {"heading", s->heading}, {"frequency", s->frequency}};
    else if (const auto* d = std::get_if<pdr::DpcFlagEvent>(&e))
      j = {{"t", d->t},
           {"kind", "dpc"},
           {"flag", d->flag == pdr::DpcFlag::InProgress ? "in_progress" : "stable"},
           {"heading", d->heading}};
    else {
      const auto& f = std::get<pdr::FloorEvent>(e);
      j = {{"t", f.t}, {"kind", "floor"}, {"delta_altitude", f.delta_altitude}, {"new_floor", f.new_floor},
           {"latency", f.latency}};
    }
    out << j.dump() << '\n';
  }
}

std::vector<pdr::PdrEvent> read_events_jsonl(const std::string& path) {
  std::vector<pdr::PdrEvent> out;
  for_each_record(path, [&](const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double t = j.at("t").get<double>();
    if (kind == "step") {
      out.emplace_back(pdr::StepEvent{t, j.at("length").get<double>(), j.at("heading").get<double>(),
                                      j.at("frequency").get<double>()});
    } else if (kind == "dpc") {
      const std::string flag = j.at("flag").get<std::string>();
      if (flag != "in_progress" && flag != "stable") throw json::other_error::create(501, "unknown dpc flag", &j);
      out.emplace_back(pdr::DpcFlagEvent{t, flag == "in_progress" ? pdr::DpcFlag::InProgress : pdr::DpcFlag::Stable,
                                         j.at("heading").get<double>()});
    } else if (kind == "floor") {
      out.emplace_back(pdr::FloorEvent{t, j.at("delta_altitude").get<double>(), j.at("new_floor").get<int>(),
                                       j.value("latency", 0.0)});
    } else {
      throw json::other_error::create(501, "unknown event kind '" + kind + "'", &j);
    }
  });
  return out;
}

void write_truth_jsonl(const std::string& path, const GroundTruth& truth) {
  auto out = open_out(path);
  for (const auto& s : truth)
    out << json{{"t", s.t}, {"x", s.position.x}, {"y", s.position.y}, {"floor", s.floor}}.dump() << '\n';
}

GroundTruth read_truth_jsonl(const std::string& path) {
  GroundTruth out;
  for_each_record(path, [&](const json& j) {
    out.push_back({j.at("t").get<double>(), {j.at("x").get<double>(), j.at("y").get<double>()}, j.at("floor").get<int>()});
  });
  return out;
}

std::vector<pdr::PdrEvent> pdr_events(const SensorTraces& traces) {
  std::vector<pdr::PdrEvent> out;
  for (const auto& s : traces.steps) out.emplace_back(s);
  for (const auto& d : traces.dpc) out.emplace_back(d);
  for (const auto& f : traces.floors) out.emplace_back(f);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return event_time(a) < event_time(b); });
  return out;
}

void write_traces(const std::string& dir, const SensorTraces& traces) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  if (!traces.imu.empty()) write_imu_jsonl((d / "imu.jsonl").string(), traces.imu);
  else write_events_jsonl((d / "events.jsonl").string(), pdr_events(traces));
  write_measurements_jsonl((d / "measurements.jsonl").string(), traces.measurements);
  write_truth_jsonl((d / "truth.jsonl").string(), traces.truth);
}

}  // namespace flp::harness
