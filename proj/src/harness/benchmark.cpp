#include "flp/harness/benchmark.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "flp/common/error.hpp"
#include "flp/harness/svg.hpp"

namespace flp::harness {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::string run_id(const std::string& scenario, std::uint32_t seed) {
  return scenario + "_s" + std::to_string(seed);
}

BenchmarkReport run_benchmark(const std::vector<Scenario>& scenarios, const filter::FilterConfig& config,
                              const BenchmarkOptions& options) {
  BenchmarkReport report;
  for (const auto& s : scenarios)
    for (std::size_t k = 0; k < options.seeds; ++k)
      report.rows.push_back({s.name, s.seed + static_cast<std::uint32_t>(k), false, {}, {}});

  const std::filesystem::path out_dir(options.out_dir);
  if (!options.out_dir.empty()) std::filesystem::create_directories(out_dir);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < report.rows.size(); i = next++) {
      RunRow& row = report.rows[i];
      const Scenario& scenario = scenarios[i / options.seeds];
      try {
        RunResult r = run_scenario(scenario, config, row.seed);
        row.metrics = std::move(r.metrics);
        row.ok = true;
        if (!options.out_dir.empty()) {
          const std::string id = run_id(row.scenario, row.seed);
          std::string csv = "t,error\n";
          for (const auto& [t, e] : row.metrics.error_series) csv += fixed(t, 3) + "," + fixed(e, 6) + "\n";
          write_file(out_dir / ("errors_" + id + ".csv"), csv);
          if (options.write_plots)
            write_trajectory_svg((out_dir / ("trajectory_" + id + ".svg")).string(), *scenario.map, r.truth,
                                 r.estimates, id);
        }
      } catch (const Error& e) {
        row.ok = false;
        row.error = std::string(to_string(e.code())) + ": " + e.what();
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = std::string("Internal: ") + e.what();
      }
      row.metrics.error_series.clear();
      row.metrics.error_series.shrink_to_fit();
    }
  };
  std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(report.rows.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& s : scenarios) {
    ScenarioSummary sum;
    sum.scenario = s.name;
    for (const auto& row : report.rows) {
      if (row.scenario != s.name) continue;
      ++sum.runs;
      if (!row.ok) {
        ++sum.failures;
        continue;
      }
      sum.d5 += row.metrics.d5;
      sum.d10 += row.metrics.d10;
      sum.rmse += row.metrics.rmse;
      ++sum.verdicts[static_cast<int>(row.metrics.verdict)];
    }
    const std::size_t ok = sum.runs - sum.failures;
    if (ok > 0) {
      sum.d5 /= static_cast<double>(ok);
      sum.d10 /= static_cast<double>(ok);
      sum.rmse /= static_cast<double>(ok);
    }
    report.summary.push_back(sum);
  }

  if (!options.out_dir.empty()) {
    write_file(out_dir / "report.csv", report_csv(report));
    write_file(out_dir / "summary.txt", format_summary(report));
  }
  return report;
}

std::string report_csv(const BenchmarkReport& report) {
  std::string csv = "scenario,seed,D5,D10,RMSE,verdict,error\n";
  for (const auto& r : report.rows) {
    if (r.ok) {
      csv += r.scenario + "," + std::to_string(r.seed) + "," + fixed(r.metrics.d5, 6) + "," + fixed(r.metrics.d10, 6) +
             "," + fixed(r.metrics.rmse, 6) + "," + std::string(to_string(r.metrics.verdict)) + ",\n";
    } else {
      std::string err = r.error;
      for (char& c : err)
        if (c == ',' || c == '\n') c = ';';
      csv += r.scenario + "," + std::to_string(r.seed) + ",,,,," + err + "\n";
    }
  }
  return csv;
}

std::string format_summary(const BenchmarkReport& report) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-18s %5s %8s %8s %8s  %s\n", "Scenario", "Runs", "D5 (%)", "D10 (%)", "RMS (m)",
                "Perfect/Good/Middle/Bad (failed)");
  out += line;
  for (const auto& s : report.summary) {
    std::snprintf(line, sizeof line, "%-18s %5zu %8.1f %8.1f %8.2f  %zu/%zu/%zu/%zu (%zu)\n", s.scenario.c_str(), s.runs,
                  s.d5, s.d10, s.rmse, s.verdicts[0], s.verdicts[1], s.verdicts[2], s.verdicts[3], s.failures);
    out += line;
  }
  return out;
}

}  // namespace flp::harness
