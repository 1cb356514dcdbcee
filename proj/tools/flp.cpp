#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flp/common/error.hpp"
#include "flp/filter/config.hpp"
#include "flp/harness/benchmark.hpp"
#include "flp/harness/builtin_suite.hpp"
#include "flp/harness/oracle.hpp"
#include "flp/harness/runner.hpp"
#include "flp/harness/svg.hpp"
#include "flp/harness/traces.hpp"
#include "flp/map/map_io.hpp"

namespace fs = std::filesystem;
using namespace flp;
using namespace flp::harness;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitEngine = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidMap:
    case ErrorCode::SinglePointOverflow:
    case ErrorCode::InfeasibleScenario:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::LoadFailed:
    case ErrorCode::UnknownBeacon:
    case ErrorCode::UnknownFloor:
      return kExitValidation;
    default:
      return kExitEngine;
  }
}

filter::FilterConfig config_from(const std::string& path) {
  return path.empty() ? filter::FilterConfig{} : filter::load_config(path);
}

Scenario scenario_from(const std::string& scenario_path, const std::string& map_path) {
  std::shared_ptr<const map::MapModel> preloaded;
  if (!map_path.empty()) preloaded = std::make_shared<const map::MapModel>(map::load_map(map_path));
  Scenario s = load_scenario(scenario_path, preloaded);
  validate_scenario(s);
  return s;
}

SensorTraces traces_from(const std::string& dir) {
  const fs::path d(dir);
  SensorTraces t;
  t.truth = read_truth_jsonl((d / "truth.jsonl").string());
  if (fs::exists(d / "measurements.jsonl")) t.measurements = read_measurements_jsonl((d / "measurements.jsonl").string());
  if (fs::exists(d / "imu.jsonl")) t.imu = read_imu_jsonl((d / "imu.jsonl").string());
  if (fs::exists(d / "events.jsonl")) {
    for (const auto& e : read_events_jsonl((d / "events.jsonl").string())) {
      if (const auto* s = std::get_if<pdr::StepEvent>(&e))
        t.steps.push_back(*s);
      else if (const auto* f = std::get_if<pdr::DpcFlagEvent>(&e))
        t.dpc.push_back(*f);
      else
        t.floors.push_back(std::get<pdr::FloorEvent>(e));
    }
  }
  return t;
}

void print_metrics(const std::string& id, const MetricsReport& m) {
  std::printf("%s: D5 %.1f%%  D10 %.1f%%  RMSE %.2f m  floor %.1f%%  %s\n", id.c_str(), m.d5, m.d10, m.rmse,
              m.floor_accuracy, std::string(to_string(m.verdict)).c_str());
}

int cmd_run(const std::string& map_path, const std::string& scenario_path, const std::string& config_path,
            std::optional<std::uint32_t> seed, const std::string& out, const std::string& traces_dir) {
  Scenario s = scenario_from(scenario_path, map_path);
  const std::uint32_t run_seed = seed.value_or(s.seed);
  const filter::FilterConfig base = config_from(config_path);
  RunResult r;
  if (traces_dir.empty()) {
    r = run_scenario(s, base, run_seed);
  } else {
    s.seed = run_seed;
    r = run_traces(s, traces_from(traces_dir), effective_config(s, base), run_seed);
  }
  const std::string id = run_id(s.name, run_seed);
  print_metrics(id, r.metrics);
  const auto& c = r.counters;
  std::printf("epochs %zu  steps %zu  killed %zu  corrected %zu  resampled %zu  floor changes %zu\n", c.epochs, c.steps,
              c.killed, c.corrected, c.resampled, c.floor_changes);
  if (!out.empty()) {
    fs::create_directories(out);
    BenchmarkReport report;
    report.rows.push_back({s.name, run_seed, true, {}, r.metrics});
    std::ofstream(fs::path(out) / "report.csv") << report_csv(report);
    std::ofstream errors(fs::path(out) / ("errors_" + id + ".csv"));
    errors << "t,error\n";
    for (const auto& [t, e] : r.metrics.error_series) errors << t << "," << e << "\n";
    std::ofstream est(fs::path(out) / ("estimates_" + id + ".csv"));
    est << "t,x,y,floor,truth_x,truth_y,truth_floor\n";
    for (std::size_t i = 0; i < r.estimates.size(); ++i)
      est << r.estimates[i].t << "," << r.estimates[i].position.x << "," << r.estimates[i].position.y << ","
          << r.estimates[i].floor << "," << r.truth[i].position.x << "," << r.truth[i].position.y << ","
          << r.truth[i].floor << "\n";
    write_trajectory_svg((fs::path(out) / ("trajectory_" + id + ".svg")).string(), *s.map, r.truth, r.estimates, id);
  }
  return 0;
}

int cmd_bench(const std::string& suite, std::size_t seeds, std::size_t threads, const std::string& out,
              const std::string& config_path, bool no_plots) {
  std::vector<Scenario> scenarios = suite == "builtin" ? builtin_suite() : load_suite(suite);
  for (const auto& s : scenarios) validate_scenario(s);
  BenchmarkOptions options;
  options.seeds = seeds;
  options.threads = threads;
  options.out_dir = out;
  options.write_plots = !no_plots;
  const BenchmarkReport report = run_benchmark(scenarios, config_from(config_path), options);
  std::cout << format_summary(report);
  for (const auto& row : report.rows)
    if (!row.ok) std::cerr << run_id(row.scenario, row.seed) << " failed: " << row.error << "\n";
  return 0;
}

int cmd_synth(const std::string& scenario_path, const std::string& map_path, std::optional<std::uint32_t> seed,
              const std::string& out) {
  Scenario s = scenario_from(scenario_path, map_path);
  if (seed) s.seed = *seed;
  const SensorTraces traces = synthesize_sensors(s);
  write_traces(out, traces);
  std::printf("%zu truth samples, %zu steps, %zu imu samples, %zu measurements -> %s\n", traces.truth.size(),
              traces.steps.size(), traces.imu.size(), traces.measurements.size(), out.c_str());
  return 0;
}

int cmd_oracle(std::size_t scenes, std::uint32_t seed) {
  const OracleSweepReport sweep = oracle_sweep(scenes, seed);
  const PruningReport pruning = pruning_benchmark(10000, seed);
  std::printf("scenes %zu  oracle hits %zu  disagreements %zu  max hit-point error %.3g m\n", sweep.scenes, sweep.hits,
              sweep.disagreements, sweep.max_point_error);
  std::printf("pruning: %zu exact tests vs %zu all-pairs (%.1fx fewer)\n", pruning.pruned_exact_tests,
              pruning.naive_exact_tests, pruning.reduction());
  return sweep.disagreements == 0 && sweep.max_point_error <= 1e-9 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-filter indoor positioning: simulation, replay and benchmarks"};
  app.require_subcommand(1);

  std::string map_path, scenario_path, config_path, out, traces_dir;
  std::optional<std::uint32_t> seed;

  auto* run = app.add_subcommand("run", "Synthesise (or replay) one scenario and score it");
  run->add_option("--map", map_path, "Map JSON overriding the scenario's map")->check(CLI::ExistingFile);
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--config", config_path, "Filter config (key = value)")->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Seed for sensor noise and filter");
  run->add_option("--out", out, "Output directory");
  run->add_option("--traces", traces_dir, "Replay traces written by 'flp synth' instead of synthesising")
      ->check(CLI::ExistingDirectory);

  std::string suite = "builtin";
  std::size_t seeds = 10, threads = 0;
  bool no_plots = false;
  std::string bench_out = "bench_out";
  auto* bench = app.add_subcommand("bench", "Run every scenario of a suite over several seeds");
  bench->add_option("--suite", suite, "Suite directory (<name>/scenario.json) or 'builtin'");
  bench->add_option("--seeds", seeds, "Seeds per scenario")->check(CLI::PositiveNumber);
  bench->add_option("--threads", threads, "Worker threads (0: all cores)");
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--config", config_path, "Filter config (key = value)")->check(CLI::ExistingFile);
  bench->add_flag("--no-plots", no_plots, "Skip trajectory SVGs");

  auto* synth = app.add_subcommand("synth", "Write synthetic sensor traces for a scenario");
  synth->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--map", map_path, "Map JSON overriding the scenario's map")->check(CLI::ExistingFile);
  synth->add_option("--seed", seed, "Noise seed");
  synth->add_option("--out", out, "Traces directory")->required();

  std::size_t scenes = 10000;
  std::uint32_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the pruned collision test with the all-pairs oracle");
  oracle->add_option("--scenes", scenes, "Random scenes");
  oracle->add_option("--seed", oracle_seed, "Scene generator seed");

  std::string export_dir = "data/suite";
  auto* exp = app.add_subcommand("export-suite", "Write the built-in scenarios as map/scenario JSON");
  exp->add_option("--out", export_dir, "Target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(map_path, scenario_path, config_path, seed, out, traces_dir);
    if (*bench) return cmd_bench(suite, seeds, threads, bench_out, config_path, no_plots);
    if (*synth) return cmd_synth(scenario_path, map_path, seed, out);
    if (*oracle) return cmd_oracle(scenes, oracle_seed);
    if (*exp) {
      export_suite(builtin_suite(), export_dir);
      std::printf("wrote %s\n", export_dir.c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEngine;
  }
  return 0;
}
