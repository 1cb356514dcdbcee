#include "flp/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "flp/common/angles.hpp"
#include "flp/common/error.hpp"
#include "flp/pdr/altitude.hpp"
#include "flp/pdr/floor_detector.hpp"
#include "flp/pdr/step_length.hpp"

namespace flp::harness {

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5eedu};
  engine_.seed(seq);
}

double NoiseSource::uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

double NoiseSource::gaussian(double sigma) noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return sigma * spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

double solve_cadence(double speed, double user_height, double step_scale) {
  if (speed > 2.5) fail(ErrorCode::InfeasibleScenario, "walking speed " + std::to_string(speed) + " m/s exceeds 2.5 m/s");
  const pdr::StepModelParams p{.user_height = user_height};
  const double lin = p.b * user_height + p.c;
  const double rhs = speed / (1.0 + step_scale);
  const double f = (-lin + std::sqrt(lin * lin + 4.0 * p.a * rhs)) / (2.0 * p.a);
  if (!(f >= 0.5 && f <= 3.0))
    fail(ErrorCode::InfeasibleScenario, "speed " + std::to_string(speed) + " m/s needs a cadence outside [0.5, 3] Hz");
  return f;
}

double altitude_to_pressure(double altitude_m) noexcept {
  return 1013.25 * std::pow(1.0 - altitude_m / 44330.0, 1.0 / 0.1903);
}

namespace {

enum Stream : std::uint64_t { kSteps = 1, kImu, kPressure, kRss, kGnss };

struct Leg {
  const Waypoint* a;
  const Waypoint* b;
  double cadence = 0.0;   // Hz, 0 while standing
  double stride = 0.0;    // m of true horizontal travel per step
  bool stairs = false;
};

std::vector<Leg> plan_legs(const Scenario& s) {
  std::vector<Leg> legs;
  for (std::size_t i = 1; i < s.waypoints.size(); ++i) {
    Leg leg{&s.waypoints[i - 1], &s.waypoints[i]};
    const double dist = map::distance(leg.a->position, leg.b->position);
    const double dur = leg.b->t - leg.a->t;
    if (dist > 1e-9) {
      const double v = dist / dur;
      if (v > 2.5) fail(ErrorCode::InfeasibleScenario, "leg " + std::to_string(i) + " needs " + std::to_string(v) + " m/s");
      const Point2 mid = (leg.a->position + leg.b->position) * 0.5;
      const map::Zone* stair = nullptr;
      for (int f : {leg.a->floor, leg.b->floor})
        if (!stair) stair = s.map->floor(f).zone_at(mid, map::ZoneKind::Stairway);
      if (stair && leg.a->floor != leg.b->floor) {
        leg.stairs = true;
        leg.stride = stair->stairway_step_length;
        leg.cadence = v / leg.stride;
        if (!(leg.cadence >= 0.5 && leg.cadence <= 3.0))
          fail(ErrorCode::InfeasibleScenario, "stair leg " + std::to_string(i) + " needs a cadence outside [0.5, 3] Hz");
      } else {
        leg.cadence = solve_cadence(v, s.user_height, s.step_scale);
        leg.stride = v / leg.cadence;
      }
    }
    legs.push_back(leg);
  }
  return legs;
}

double ma_at(const Scenario& s, double t) {
  double ma = s.initial_ma;
  for (const auto& d : s.device_schedule) {
    if (t >= d.t + s.dpc_duration)
      ma += d.delta;
    else if (t > d.t)
      ma += d.delta * (t - d.t) / s.dpc_duration;
  }
  return ma;
}

double tilt_at(const Scenario& s, double t) {
  // The phone alternates between lying flat and standing upright at each change.
  double tilt = 0.0;
  for (const auto& d : s.device_schedule) {
    const double target = tilt == 0.0 ? std::numbers::pi / 2.0 : 0.0;
    if (t >= d.t + s.dpc_duration)
      tilt = target;
    else if (t > d.t)
      return tilt + (target - tilt) * (t - d.t) / s.dpc_duration;
  }
  return tilt;
}

bool in_dpc(const Scenario& s, double t) {
  for (const auto& d : s.device_schedule)
    if (t >= d.t && t <= d.t + s.dpc_duration) return true;
  return false;
}

const Leg* leg_at(const std::vector<Leg>& legs, double t) {
  for (const auto& l : legs)
    if (t >= l.a->t && t < l.b->t) return &l;
  return nullptr;
}

double leg_heading(const Leg& l) {
  const Point2 d = l.b->position - l.a->position;
  return std::atan2(d.y, d.x);
}

/// User heading with corners rounded over half a second.
double user_heading(const std::vector<Leg>& legs, double t, double initial) {
  constexpr double kBlend = 0.25;
  double h = initial;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].cadence == 0.0) continue;
    const double hi = leg_heading(legs[i]);
    if (t < legs[i].a->t - kBlend) return h;
    if (t < legs[i].a->t + kBlend && i > 0) {
      const double f = std::clamp((t - (legs[i].a->t - kBlend)) / (2.0 * kBlend), 0.0, 1.0);
      return h + angle_diff(hi, h) * f;
    }
    if (t < legs[i].b->t - kBlend) return hi;
    h = hi;
  }
  return h;
}

}  // namespace

SensorTraces synthesize_sensors(const Scenario& s) {
  validate_scenario(s);
  const std::vector<Leg> legs = plan_legs(s);
  SensorTraces out;
  out.truth = interpolate_ground_truth(s.waypoints, 10.0, s.map.get());
  const double t0 = s.waypoints.front().t;
  const double t1 = s.waypoints.back().t;
  const double psi0 = initial_user_heading(s);
  const auto heights = s.map->floor_heights();

  auto altitude_at = [&](double t) {
    const Leg* l = leg_at(legs, t);
    if (!l) return heights[static_cast<std::size_t>(s.waypoints.back().floor)];
    const double ha = heights[static_cast<std::size_t>(l->a->floor)];
    const double hb = heights[static_cast<std::size_t>(l->b->floor)];
    return ha + (hb - ha) * (t - l->a->t) / (l->b->t - l->a->t);
  };

  // Barometer.
  {
    NoiseSource rng(s.seed, kPressure);
    const double dt = 1.0 / s.pressure_rate;
    for (std::size_t k = 0;; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      if (t > t1 + 1e-9) break;
      const double p = altitude_to_pressure(altitude_at(t)) + s.noise.pressure_drift * (t - t0) / 3600.0 +
                       rng.gaussian(s.noise.pressure_noise);
      out.pressure.emplace_back(t, p);
    }
  }

  if (s.pdr_source == PdrSource::Steps) {
    NoiseSource rng(s.seed, kSteps);
    double phase = 0.0;
    double heading_walk = 0.0;
    std::vector<std::pair<double, double>> walk_history{{t0, 0.0}};
    Point2 last = s.waypoints.front().position;
    const double c0 = psi0 - s.initial_ma;
    constexpr double kDt = 0.005;
    for (const auto& leg : legs) {
      if (leg.cadence == 0.0) {
        phase = 0.0;
        continue;
      }
      for (double t = leg.a->t; t < leg.b->t; t += kDt) {
        const double dt = std::min(kDt, leg.b->t - t);
        const double before = phase;
        phase += leg.cadence * dt;
        if (std::floor(phase) == std::floor(before)) continue;
        const double ts = t + (std::floor(phase) - before) / leg.cadence;
        const Point2 pos = truth_at(s.waypoints, ts, s.map.get()).position;
        const Point2 chord = pos - last;
        last = pos;
        heading_walk += rng.gaussian(s.noise.heading_per_step);
        walk_history.emplace_back(ts, heading_walk);
        const double scale = 1.0 + rng.gaussian(s.noise.step_length_fraction);
        if (in_dpc(s, ts)) continue;  // the step detector drops steps while the phone is handled
        pdr::StepEvent e;
        e.t = ts;
        e.frequency = std::clamp(leg.cadence, 0.5, 3.0);
        e.length = chord.norm() / (leg.stairs ? 1.0 : 1.0 + s.step_scale) * scale;
        e.heading = std::atan2(chord.y, chord.x) - ma_at(s, ts) - c0 + heading_walk;
        out.steps.push_back(e);
        out.step_positions.push_back(pos);
      }
    }
    // Device headings around each manipulation, consistent with the step headings.
    auto device_heading = [&](double t) {
      auto it = std::upper_bound(walk_history.begin(), walk_history.end(), t,
                                 [](double v, const auto& w) { return v < w.first; });
      if (it != walk_history.begin()) --it;
      return user_heading(legs, t, psi0) - ma_at(s, t) - c0 + it->second;
    };
    for (const auto& d : s.device_schedule) {
      out.dpc.push_back({d.t, pdr::DpcFlag::InProgress, device_heading(d.t)});
      out.dpc.push_back({d.t + s.dpc_duration, pdr::DpcFlag::Stable, device_heading(d.t + s.dpc_duration)});
    }
    if (heights.size() >= 2) {
      pdr::AltitudeFilter alt;
      pdr::FloorChangeDetector det(heights, s.waypoints.front().floor);
      for (const auto& [t, p] : out.pressure)
        if (auto e = det.push(alt.push(t, p))) out.floors.push_back(*e);
    }
  } else {
    NoiseSource rng(s.seed, kImu);
    const double dt = 1.0 / s.imu_rate;
    const Eigen::Vector3d bias(0.0, 0.0, s.noise.gyro_bias);
    double phase = 0.0;
    Eigen::Quaterniond prev_q;
    std::size_t next_pressure = 0;
    for (std::size_t k = 0;; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      if (t > t1 + 1e-9) break;
      const Leg* leg = leg_at(legs, t);
      const double cadence = leg ? leg->cadence : 0.0;
      if (k > 0) phase += cadence * dt;
      if (cadence == 0.0) phase = 0.0;
      const double yaw = user_heading(legs, t, psi0) - ma_at(s, t);
      const Eigen::Quaterniond q = Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())) *
                                   Eigen::Quaterniond(Eigen::AngleAxisd(tilt_at(s, t), Eigen::Vector3d::UnitX()));
      const double bounce = cadence > 0.0 ? 2.0 * std::sin(2.0 * std::numbers::pi * phase) : 0.0;
      const Eigen::Vector3d f_world(0.0, 0.0, pdr::kGravity + bounce);
      pdr::ImuSample sample;
      sample.t = t;
      sample.accel = q.conjugate() * f_world;
      for (int i = 0; i < 3; ++i) sample.accel[i] += rng.gaussian(s.noise.accel_noise);
      Eigen::Vector3d omega = Eigen::Vector3d::Zero();
      if (k > 0) {
        const Eigen::AngleAxisd step(prev_q.conjugate() * q);
        omega = step.axis() * step.angle() / dt;
      }
      prev_q = q;
      sample.gyro = omega + bias;
      for (int i = 0; i < 3; ++i) sample.gyro[i] += rng.gaussian(s.noise.gyro_noise);
      if (next_pressure < out.pressure.size() && out.pressure[next_pressure].first <= t + 1e-9)
        sample.pressure = out.pressure[next_pressure++].second;
      out.imu.push_back(sample);
    }
  }

  // Beacon scans.
  {
    NoiseSource rng(s.seed, kRss);
    const double dt = 1.0 / s.rss_rate;
    const measurements::RssModelParams model;
    for (std::size_t k = 1;; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      if (t > t1 + 1e-9) break;
      const TruthSample u = truth_at(s.waypoints, t, s.map.get());
      for (const auto& floor : s.map->floors) {
        if (floor.index != u.floor && !s.cross_floor_leakage) continue;
        const double dz = floor.height - heights[static_cast<std::size_t>(u.floor)];
        for (const auto& b : floor.beacons) {
          const double d = std::hypot(map::distance(u.position, b.position), dz);
          const double rss = measurements::rss_at_distance(d, model) + rng.gaussian(s.beacon_noise_sigma);
          if (rss < s.rss_sensitivity) continue;
          out.measurements.emplace_back(measurements::RssObservation{t, b.id, std::clamp(rss, -120.0, 0.0)});
        }
      }
    }
  }
  {
    NoiseSource rng(s.seed, kGnss);
    const double dt = 1.0 / s.gnss_rate;
    for (const auto& w : s.gnss_windows) {
      for (std::size_t k = 0;; ++k) {
        const double t = w.t0 + static_cast<double>(k) * dt;
        if (t > w.t1 + 1e-9 || t > t1 + 1e-9) break;
        const Point2 p = truth_at(s.waypoints, t, s.map.get()).position;
        out.measurements.emplace_back(
            measurements::GnssFix{t, {p.x + rng.gaussian(s.gnss_sigma), p.y + rng.gaussian(s.gnss_sigma)}, s.gnss_sigma});
      }
    }
  }
  std::stable_sort(out.measurements.begin(), out.measurements.end(), [](const auto& a, const auto& b) {
    return measurements::measurement_time(a) < measurements::measurement_time(b);
  });
  return out;
}

}  // namespace flp::harness
