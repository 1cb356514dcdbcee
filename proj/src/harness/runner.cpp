#include "flp/harness/runner.hpp"

#include <algorithm>
#include <cmath>

#include "flp/harness/traces.hpp"

namespace flp::harness {

RunResult run_traces(const Scenario& scenario, const SensorTraces& traces, const filter::FilterConfig& config,
                     std::uint32_t engine_seed, const RunObserver& observer) {
  filter::Engine engine(scenario.map, config, make_prior(scenario), engine_seed);
  const std::vector<pdr::PdrEvent> events = pdr_events(traces);

  RunResult r;
  r.scenario = scenario.name;
  r.seed = engine_seed;
  r.truth = traces.truth;
  r.estimates.reserve(traces.truth.size());

  std::size_t ie = 0, ii = 0, im = 0;
  for (const auto& truth : traces.truth) {
    // Sensor-side events go first when timestamps tie with measurements.
    for (;;) {
      const double te = ie < events.size() ? std::visit([](const auto& v) { return v.t; }, events[ie]) : INFINITY;
      const double ti = ii < traces.imu.size() ? traces.imu[ii].t : INFINITY;
      const double tm = im < traces.measurements.size() ? measurements::measurement_time(traces.measurements[im]) : INFINITY;
      const double next = std::min({te, ti, tm});
      if (!(next <= truth.t)) break;
      if (ti == next)
        engine.feed(traces.imu[ii++]);
      else if (te == next)
        engine.feed(events[ie++]);
      else
        engine.feed(traces.measurements[im++]);
    }
    if (observer) observer(truth, engine);
    const auto est = engine.poll();
    r.estimates.push_back({truth.t, est->position, est->floor});
  }
  r.metrics = compute_metrics(r.estimates, r.truth);
  r.counters = engine.counters();
  return r;
}

RunResult run_scenario(const Scenario& scenario, const filter::FilterConfig& base_config, std::uint32_t seed,
                       const RunObserver& observer) {
  Scenario s = scenario;
  s.seed = seed;
  const SensorTraces traces = synthesize_sensors(s);
  return run_traces(s, traces, effective_config(s, base_config), seed, observer);
}

}  // namespace flp::harness
