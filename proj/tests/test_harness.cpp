#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flp/common/error.hpp"
#include "flp/common/lcg.hpp"
#include "flp/harness/benchmark.hpp"
#include "flp/harness/builtin_suite.hpp"
#include "flp/harness/runner.hpp"
#include "flp/harness/traces.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace flp;
using namespace flp::harness;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("flp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Open 60 x 40 m hall with beacons along the walking line.
Scenario open_walk(std::uint32_t seed) {
  std::vector<map::Beacon> beacons;
  for (int i = 0; i < 10; ++i)
    beacons.push_back({"b" + std::to_string(i), {5.0 + 5.0 * i, 12.0}, 0, map::BeaconKind::BLE});
  Scenario s;
  s.name = "open_walk";
  s.map = test::single_floor(test::box_walls(0, 0, 60, 40), {}, beacons);
  s.waypoints = {{0, {5, 10}, 0}, {30, {45, 10}, 0}, {45, {45, 30}, 0}, {70, {15, 30}, 0}, {80, {15, 20}, 0}};
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("lcg recurrence") {
  CHECK(lcg_next(0).first == 1013904223u);
  CHECK(lcg_next(1).first == 1015568748u);
  CHECK(lcg_next(0).second == doctest::Approx(1013904223.0 / 4294967296.0));

  // Against 64-bit modular arithmetic for the first 1000 states.
  Lcg g(12345);
  std::uint64_t ref = 12345;
  for (int i = 0; i < 1000; ++i) {
    ref = (1664525ull * ref + 1013904223ull) % 4294967296ull;
    REQUIRE(g.next_u32() == ref);
  }

  // Chi-square with 100 bins over 10^6 draws; 148.23 is the p = 0.001 critical value at 99 dof.
  Lcg u(7);
  std::vector<double> bins(100, 0.0);
  for (int i = 0; i < 1000000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    bins[static_cast<std::size_t>(x * 100.0)] += 1.0;
  }
  double chi2 = 0.0;
  for (double b : bins) chi2 += (b - 10000.0) * (b - 10000.0) / 10000.0;
  CHECK(chi2 < 148.23);
}

TEST_CASE("ground truth interpolation") {
  const std::vector<Waypoint> w{{0, {0, 0}, 0}, {10, {10, 0}, 0}};
  const auto mid = truth_at(w, 5.0);
  CHECK(mid.position.x == doctest::Approx(5.0));
  CHECK(mid.position.y == doctest::Approx(0.0));
  CHECK(truth_at(w, 0.0).position == Point2{0, 0});
  CHECK(truth_at(w, 10.0).position == Point2{10, 0});

  const auto g = interpolate_ground_truth(w);
  CHECK(g.size() == 101);
  CHECK(g.back().position.x == doctest::Approx(10.0));

  // Piecewise slopes match finite differences.
  const std::vector<Waypoint> uneven{{0, {0, 0}, 0}, {2, {4, 0}, 0}, {12, {4, 5}, 0}, {13, {0, 5}, 0}};
  const auto h = interpolate_ground_truth(uneven);
  const double slopes[][2] = {{2.0, 0.0}, {0.0, 0.5}, {-4.0, 0.0}};
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double tm = 0.5 * (h[i].t + h[i - 1].t);
    const int leg = tm < 2 ? 0 : tm < 12 ? 1 : 2;
    const double dt = h[i].t - h[i - 1].t;
    CHECK((h[i].position.x - h[i - 1].position.x) / dt == doctest::Approx(slopes[leg][0]).epsilon(1e-9));
    CHECK((h[i].position.y - h[i - 1].position.y) / dt == doctest::Approx(slopes[leg][1]).epsilon(1e-9));
  }

  CHECK_THROWS_AS(interpolate_ground_truth(std::vector<Waypoint>{{0, {0, 0}, 0}}), Error);
  CHECK_THROWS_AS(interpolate_ground_truth(std::vector<Waypoint>{{0, {0, 0}, 0}, {0, {1, 0}, 0}}), Error);
}

TEST_CASE("two-floor truth switches floor on the stairs") {
  const auto s = two_floor_scenario(1);
  const auto g = interpolate_ground_truth(s.waypoints, 10.0, s.map.get());
  int changes = 0;
  for (std::size_t i = 1; i < g.size(); ++i) changes += g[i].floor != g[i - 1].floor;
  CHECK(changes == 1);
  CHECK(g.front().floor == 0);
  CHECK(g.back().floor == 1);
}

TEST_CASE("sensor synthesis") {
  SUBCASE("deterministic in the seed") {
    const auto a = synthesize_sensors(office_scenario(3));
    const auto b = synthesize_sensors(office_scenario(3));
    const auto da = scratch_dir("synth_a");
    const auto db = scratch_dir("synth_b");
    write_traces(da.string(), a);
    write_traces(db.string(), b);
    for (const char* f : {"events.jsonl", "measurements.jsonl", "truth.jsonl"}) {
      CHECK(fs::exists(da / f));
      CHECK(slurp(da / f) == slurp(db / f));
    }
    const auto c = synthesize_sensors(office_scenario(4));
    CHECK(c.steps.size() > 0);
    CHECK(c.steps[5].heading != a.steps[5].heading);
  }

  SUBCASE("RSS residual spread matches the configured noise") {
    Scenario s = open_walk(9);
    s.rss_rate = 50.0;
    s.beacon_noise_sigma = 4.0;
    const auto tr = synthesize_sensors(s);
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& m : tr.measurements) {
      const auto* r = std::get_if<measurements::RssObservation>(&m);
      if (!r) continue;
      const auto* b = s.map->find_beacon(r->beacon_id);
      const Point2 x = truth_at(s.waypoints, r->t, s.map.get()).position;
      // Far beacons are clipped by the receiver sensitivity; keep the unbiased ones.
      if (map::distance(x, b->position) > 15.0) continue;
      const double res = r->rss - measurements::rss_predict(x, *b, measurements::RssModelParams{});
      sum += res;
      sq += res * res;
      ++n;
    }
    REQUIRE(n >= 10000);
    const double mean = sum / static_cast<double>(n);
    const double sd = std::sqrt(sq / static_cast<double>(n) - mean * mean);
    CHECK(std::abs(sd - 4.0) < 0.4);
    CHECK(std::abs(mean) < 0.2);
  }

  SUBCASE("infeasible speed") {
    Scenario s = open_walk(1);
    s.waypoints = {{0, {5, 10}, 0}, {5, {45, 10}, 0}};
    try {
      synthesize_sensors(s);
      FAIL("expected InfeasibleScenario");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleScenario);
    }
  }
}

TEST_CASE("zero-noise round trip dead-reckons the truth") {
  Scenario s = open_walk(2);
  s.map = test::open_floor(-10, -10, 70, 50);
  s.prior = PriorKind::KnownPose;
  s.prior_sigma = 0.0;
  s.initial_ma = 0.7;
  s.noise = SensorNoise{};
  const auto tr = synthesize_sensors(s);
  filter::FilterConfig cfg;
  cfg.n_particles = 50;
  cfg.noise = filter::NoiseConfig::zero();
  cfg.init_epsilon_sigma = 0.0;
  filter::Engine eng(s.map, cfg, make_prior(s), 1);
  double sq = 0.0;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    eng.feed(tr.steps[i]);
    const auto est = eng.poll();
    REQUIRE(est.has_value());
    const double e = map::distance(est->position, tr.step_positions[i]);
    sq += e * e;
  }
  REQUIRE(tr.steps.size() > 50);
  CHECK(std::sqrt(sq / static_cast<double>(tr.steps.size())) < 0.05);
}

TEST_CASE("metrics") {
  SUBCASE("zero error") {
    std::vector<std::pair<double, double>> e;
    for (int i = 0; i < 100; ++i) e.emplace_back(0.1 * i, 0.0);
    const auto m = metrics_from_errors(e);
    CHECK(m.d5 == 100.0);
    CHECK(m.rmse == 0.0);
    CHECK(m.verdict == Verdict::Perfect);
  }

  SUBCASE("constant 7 m") {
    std::vector<std::pair<double, double>> e;
    for (int i = 0; i < 100; ++i) e.emplace_back(0.1 * i, 7.0);
    const auto m = metrics_from_errors(e);
    CHECK(m.d5 == 0.0);
    CHECK(m.d10 == 100.0);
    CHECK(m.rmse == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(m.verdict == Verdict::Bad);
  }

  SUBCASE("verdict bins") {
    std::vector<std::pair<double, double>> e;
    for (int i = 0; i < 100; ++i) e.emplace_back(0.1 * i, i < 65 ? 1.0 : 12.0);
    const auto m = metrics_from_errors(e);
    CHECK(m.d5 == doctest::Approx(65.0));
    CHECK(m.verdict == Verdict::Good);
    CHECK(classify(80.0) == Verdict::Perfect);
    CHECK(classify(79.9) == Verdict::Good);
    CHECK(classify(60.0) == Verdict::Good);
    CHECK(classify(40.0) == Verdict::Middle);
    CHECK(classify(39.99) == Verdict::Bad);
  }

  SUBCASE("ordering and translation invariance") {
    Lcg rng(3);
    GroundTruth truth;
    std::vector<EstimateSample> est;
    for (int i = 0; i < 500; ++i) {
      const double t = 0.1 * i;
      truth.push_back({t, {t, std::sin(t)}, 0});
      est.push_back({t, {t + rng.gaussian(6.0), std::sin(t) + rng.gaussian(6.0)}, 0});
    }
    const auto a = compute_metrics(est, truth);
    CHECK(a.d5 <= a.d10);
    CHECK(a.rmse >= a.mean_error);
    const Point2 shift{-250.5, 1e3};
    for (auto& s : truth) s.position = s.position + shift;
    for (auto& s : est) s.position = s.position + shift;
    const auto b = compute_metrics(est, truth);
    CHECK(b.d5 == a.d5);
    CHECK(b.d10 == a.d10);
    CHECK(b.rmse == doctest::Approx(a.rmse).epsilon(1e-9));
  }

  SUBCASE("too little overlap") {
    GroundTruth truth;
    for (int i = 0; i < 100; ++i) truth.push_back({0.1 * i, {0, 0}, 0});
    const std::vector<EstimateSample> est{{8.0, {0, 0}, 0}, {9.9, {0, 0}, 0}};
    try {
      compute_metrics(est, truth);
      FAIL("expected NoOverlap");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoOverlap);
    }
  }
}

TEST_CASE("benchmark aggregation") {
  BenchmarkOptions opt;
  opt.seeds = 3;
  opt.threads = 2;
  const auto empty = run_benchmark({}, filter::FilterConfig{}, opt);
  CHECK(empty.rows.empty());
  CHECK(empty.summary.empty());

  const auto dir = scratch_dir("bench");
  opt.out_dir = dir.string();
  Scenario s = corridor_scenario(5);
  const auto r = run_benchmark({s}, filter::FilterConfig{}, opt);
  REQUIRE(r.rows.size() == 3);
  REQUIRE(r.summary.size() == 1);
  double d5 = 0.0;
  for (const auto& row : r.rows) {
    CHECK(row.ok);
    CHECK(row.metrics.d5 <= row.metrics.d10);
    d5 += row.metrics.d5 / 3.0;
  }
  CHECK(r.summary[0].d5 == doctest::Approx(d5).epsilon(1e-12));
  CHECK(r.rows[1].seed == s.seed + 1);
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(fs::exists(dir / ("errors_" + run_id("corridor", s.seed) + ".csv")));
  CHECK(fs::exists(dir / ("trajectory_" + run_id("corridor", s.seed) + ".svg")));
  CHECK(slurp(dir / "report.csv").rfind("scenario,seed,D5,D10,RMSE,verdict", 0) == 0);

  // A failing run is reported and the batch continues.
  Scenario bad = corridor_scenario(5);
  bad.name = "broken";
  bad.waypoints = {{0, {30, 1.25}, 0}, {1, {59, 1.25}, 0}};
  opt.out_dir.clear();
  const auto mixed = run_benchmark({bad, s}, filter::FilterConfig{}, opt);
  REQUIRE(mixed.rows.size() == 6);
  CHECK_FALSE(mixed.rows[0].ok);
  CHECK(mixed.rows[0].error.find("InfeasibleScenario") != std::string::npos);
  CHECK(mixed.rows[3].ok);
  CHECK(format_summary(mixed).find("broken") != std::string::npos);
}

TEST_CASE("end-to-end determinism") {
  const auto a = run_scenario(two_floor_scenario(2), filter::FilterConfig{}, 2);
  const auto b = run_scenario(two_floor_scenario(2), filter::FilterConfig{}, 2);
  CHECK(a.metrics.d5 == b.metrics.d5);
  CHECK(a.metrics.rmse == b.metrics.rmse);
  REQUIRE(a.estimates.size() == b.estimates.size());
  for (std::size_t i = 0; i < a.estimates.size(); ++i) CHECK(a.estimates[i].position == b.estimates[i].position);
}

TEST_CASE("scenario files") {
  const auto dir = scratch_dir("suite");
  export_suite(builtin_suite(), dir.string());
  const auto loaded = load_suite(dir.string());
  const auto original = builtin_suite();
  REQUIRE(loaded.size() == original.size());
  for (const auto& s : loaded) {
    const auto it = std::find_if(original.begin(), original.end(), [&](const Scenario& o) { return o.name == s.name; });
    REQUIRE(it != original.end());
    CHECK(s.waypoints.size() == it->waypoints.size());
    CHECK(s.device_schedule.size() == it->device_schedule.size());
    CHECK(s.map->floors.size() == it->map->floors.size());
    CHECK(scenario_to_json(s, "map.json") == scenario_to_json(*it, "map.json"));
  }

  auto parse_error = [&](const std::string& text) {
    try {
      validate_scenario(parse_scenario(text, "scn.json", dir.string(), corridor_map()));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  CHECK(parse_error("{ not json") == ErrorCode::ParseError);
  CHECK(parse_error(R"({"name":"x","waypoints":[[0,30,1.25,0],[0,31,1.25,0]]})") ==
        ErrorCode::InvalidArgument);
  // Walking straight through the corridor's south wall.
  CHECK(parse_error(R"({"name":"x","waypoints":[[0,30,1.25,0],[10,30,-0.5,0]]})") ==
        ErrorCode::InfeasibleScenario);
}

TEST_CASE("trace files round trip") {
  const auto dir = scratch_dir("traces");
  const auto tr = synthesize_sensors(two_floor_scenario(1));
  const auto events = pdr_events(tr);
  write_events_jsonl((dir / "events.jsonl").string(), events);
  const auto back = read_events_jsonl((dir / "events.jsonl").string());
  REQUIRE(back.size() == events.size());
  CHECK(std::count_if(back.begin(), back.end(), [](const auto& e) { return std::holds_alternative<pdr::FloorEvent>(e); }) >= 1);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i].index() == events[i].index());

  write_measurements_jsonl((dir / "m.jsonl").string(), tr.measurements);
  const auto ms = read_measurements_jsonl((dir / "m.jsonl").string());
  REQUIRE(ms.size() == tr.measurements.size());
  CHECK(measurements::measurement_time(ms.back()) == measurements::measurement_time(tr.measurements.back()));

  std::vector<pdr::ImuSample> imu(3);
  imu[1].t = 0.01;
  imu[1].accel = {0.1, 0.2, 9.8};
  imu[1].pressure = 1000.5;
  write_imu_jsonl((dir / "imu.jsonl").string(), imu);
  const auto imu2 = read_imu_jsonl((dir / "imu.jsonl").string());
  REQUIRE(imu2.size() == 3);
  CHECK(imu2[1].accel.isApprox(imu[1].accel));
  CHECK(imu2[1].pressure == imu[1].pressure);
  CHECK_FALSE(imu2[0].pressure.has_value());

  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << R"({"t":0,"kind":"gnss","x":1,"y":2,"sigma":5})" << "\n" << "{oops\n";
  }
  try {
    read_measurements_jsonl((dir / "bad.jsonl").string());
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}
