#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "flp/common/error.hpp"
#include "flp/pdr/altitude.hpp"
#include "flp/pdr/dpc_detector.hpp"
#include "flp/pdr/floor_detector.hpp"
#include "flp/pdr/orientation.hpp"
#include "flp/pdr/pdr_pipeline.hpp"
#include "flp/pdr/step_detector.hpp"
#include "flp/pdr/step_length.hpp"

using namespace flp;
using namespace flp::pdr;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFs = 100.0;

std::vector<ImuSample> walking(double seconds, double freq, const Eigen::Matrix3d& rot = Eigen::Matrix3d::Identity()) {
  std::vector<ImuSample> out;
  for (int k = 0; k < static_cast<int>(seconds * kFs); ++k) {
    const double t = k / kFs;
    ImuSample s;
    s.t = t;
    s.accel = rot * Eigen::Vector3d(0, 0, kGravity + 2.0 * std::sin(2 * kPi * freq * t));
    out.push_back(s);
  }
  return out;
}

std::vector<ImuSample> still(double seconds, const Eigen::Vector3d& gyro = Eigen::Vector3d::Zero()) {
  std::vector<ImuSample> out;
  for (int k = 0; k < static_cast<int>(seconds * kFs); ++k) {
    ImuSample s;
    s.t = k / kFs;
    s.accel = Eigen::Vector3d(0, 0, kGravity);
    s.gyro = gyro;
    out.push_back(s);
  }
  return out;
}

double isa_pressure(double altitude) { return 1013.25 * std::pow(1.0 - altitude / 44330.0, 1.0 / 0.1903); }

// Pressure samples at 10 Hz following altitude(t).
template <class F>
std::vector<std::pair<double, double>> pressure_trace(double seconds, F altitude) {
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k <= static_cast<int>(seconds * 10.0); ++k) {
    const double t = k / 10.0;
    out.emplace_back(t, isa_pressure(altitude(t)));
  }
  return out;
}

double ramp(double t, double t0, double duration, double height) {
  return height * std::clamp((t - t0) / duration, 0.0, 1.0);
}

}  // namespace

TEST_CASE("step detection on synthetic accelerometer norms") {
  SUBCASE("constant gravity: no steps") {
    CHECK(detect_steps(still(10.0), kFs).empty());
  }
  SUBCASE("1.8 Hz walking: 18 steps at 1.8 Hz") {
    // Reference count from a scipy band-pass (butter order 2, 1-2 Hz) and peak picking.
    const auto steps = detect_steps(walking(10.0, 1.8), kFs);
    CHECK(std::abs(static_cast<int>(steps.size()) - 18) <= 1);
    for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i].frequency == doctest::Approx(1.8).epsilon(0.05 / 1.8));
  }
  SUBCASE("irregular cadence during a device position change is suppressed") {
    // Alternating long and short cycles from 1 s on.
    std::vector<ImuSample> stream;
    double phase = 0.0, cycle_freq = 1.8;
    for (int k = 0; k < 1000; ++k) {
      const double t = k / kFs;
      const double before = phase;
      phase += (t >= 1.0 && t < 5.5 ? cycle_freq : 1.8) / kFs;
      if (std::floor(phase) != std::floor(before)) cycle_freq = cycle_freq > 1.5 ? 1.1 : 2.6;
      ImuSample s;
      s.t = t;
      s.accel = Eigen::Vector3d(0, 0, kGravity + 2.0 * std::sin(2 * kPi * phase));
      stream.push_back(s);
    }
    const std::vector<DpcFlagEvent> flags{{3.0, DpcFlag::InProgress, 0.0}, {5.0, DpcFlag::Stable, 0.0}};
    const auto steps = detect_steps(stream, kFs, flags);
    CHECK(steps.size() > 8);
    for (const auto& s : steps) {
      INFO("step at ", s.t, " f ", s.frequency);
      CHECK_FALSE((s.t >= 3.0 && s.t <= 5.0));
    }
  }
  SUBCASE("step times do not depend on device orientation") {
    const auto ref = detect_steps(walking(10.0, 1.6), kFs);
    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitX()) * Eigen::AngleAxisd(-1.9, Eigen::Vector3d::UnitZ()))
            .toRotationMatrix();
    const auto rotated = detect_steps(walking(10.0, 1.6, rot), kFs);
    REQUIRE(rotated.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(rotated[i].t == doctest::Approx(ref[i].t));
  }
  SUBCASE("input checks") {
    CHECK_THROWS_AS(detect_steps(walking(10.0, 1.8), 10.0), Error);
    CHECK_THROWS_AS(detect_steps(walking(2.0, 1.8), kFs), Error);
  }
}

TEST_CASE("step length model") {
  StepModelParams p;
  p.user_height = 1.8;
  CHECK(step_length(2.0, p) == doctest::Approx(0.808).epsilon(1e-12));
  p.user_height = 1.7;
  CHECK(step_length(1.5, p) == doctest::Approx(0.580).epsilon(1e-12));
  p.user_height = 1.0;
  CHECK(step_length_raw(0.5, p) == doctest::Approx(-0.1685).epsilon(1e-12));
  CHECK(step_length(0.5, p) == kMinStepLength);
  p.user_height = 2.3;
  CHECK(step_length(3.0, p) == kMaxStepLength);
  CHECK_THROWS_AS(step_length(0.4, p), Error);
  CHECK_THROWS_AS(step_length(3.1, p), Error);

  // Affine in F and H before clamping, clamped output always in range.
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> fd(0.5, 3.0), hd(1.0, 2.3);
  for (int i = 0; i < 1000; ++i) {
    StepModelParams q;
    const double f = fd(gen), h = hd(gen);
    q.user_height = h;
    const double l = step_length(f, q);
    CHECK(l >= kMinStepLength);
    CHECK(l <= kMaxStepLength);
    CHECK(step_length_raw(f, q) == doctest::Approx(0.339 * f + 0.585 * h - 0.923));
  }
}

TEST_CASE("orientation propagation") {
  OrientationState st;
  const double dt = 0.01;
  SUBCASE("still device: heading stays put") {
    for (const auto& s : still(60.0)) st = update_orientation(st, s, dt);
    CHECK(st.heading == doctest::Approx(0.0));
  }
  SUBCASE("10 deg/s yaw for 9 s turns 90 deg") {
    auto samples = still(9.0 + dt, {0, 0, 10.0 * kPi / 180.0});
    for (const auto& s : samples) st = update_orientation(st, s, dt);
    // The first sample only initialises the attitude.
    CHECK(std::abs(st.heading * 180.0 / kPi - 90.0) < 0.1);
  }
  SUBCASE("5 deg/s bias estimated and removed leaves < 0.5 deg/min drift") {
    const double bias = 5.0 * kPi / 180.0;
    std::mt19937 gen(8);
    std::normal_distribution<double> n(0.0, 0.001);
    auto window = still(5.0);
    for (auto& s : window) s.gyro = Eigen::Vector3d(n(gen), n(gen), bias + n(gen));
    const auto est = estimate_gyro_bias(window);
    REQUIRE(est);
    st.gyro_bias = *est;
    auto minute = still(60.0);
    for (auto& s : minute) s.gyro = Eigen::Vector3d(n(gen), n(gen), bias + n(gen));
    for (const auto& s : minute) st = update_orientation(st, s, dt);
    CHECK(std::abs(st.heading * 180.0 / kPi) < 0.5);
  }
  SUBCASE("quaternion stays unit under arbitrary motion") {
    std::mt19937 gen(2);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int k = 0; k < 5000; ++k) {
      ImuSample s;
      s.t = k * dt;
      s.accel = Eigen::Vector3d(n(gen), n(gen), kGravity + n(gen));
      s.gyro = Eigen::Vector3d(n(gen), n(gen), n(gen));
      st = update_orientation(st, s, dt);
      REQUIRE(std::abs(st.q.norm() - 1.0) < 1e-9);
    }
  }
  SUBCASE("dt outside (0, 0.1] is rejected") {
    st = update_orientation(st, still(0.1)[0], dt);
    CHECK_THROWS_AS(update_orientation(st, still(0.1)[1], 0.0), Error);
    CHECK_THROWS_AS(update_orientation(st, still(0.1)[1], 0.2), Error);
  }
}

TEST_CASE("gyro bias estimation") {
  SUBCASE("constant gyro: exact bias") {
    const Eigen::Vector3d b(0.01, -0.02, 0.005);
    const auto est = estimate_gyro_bias(still(2.0, b));
    REQUIRE(est);
    CHECK((*est - b).norm() < 1e-12);
  }
  SUBCASE("walking window is not static") {
    auto w = walking(2.0, 1.8);
    CHECK_FALSE(estimate_gyro_bias(w));
  }
  SUBCASE("noisy static gyro: within 3 sigma / sqrt(N)") {
    const double sigma = 0.002;
    std::mt19937 gen(4);
    std::normal_distribution<double> n(0.0, sigma);
    const Eigen::Vector3d b(0.02, 0.01, -0.03);
    auto w = still(2.0);
    for (auto& s : w) s.gyro = b + Eigen::Vector3d(n(gen), n(gen), n(gen));
    const auto est = estimate_gyro_bias(w);
    REQUIRE(est);
    const double tol = 3.0 * sigma / std::sqrt(static_cast<double>(w.size()));
    for (int i = 0; i < 3; ++i) CHECK(std::abs((*est)[i] - b[i]) < tol);
  }
  SUBCASE("short window rejected") {
    CHECK_THROWS_AS(estimate_gyro_bias(still(0.5)), Error);
  }
}

TEST_CASE("device position change detection") {
  SUBCASE("vertical shift properties") {
    const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
    CHECK(vertical_shift(z, z) == 0.0);
    CHECK(vertical_shift(z, Eigen::Vector3d::UnitX()) == doctest::Approx(kPi / 2));
    const Eigen::Vector3d a = Eigen::Vector3d(0.3, -0.2, 0.9).normalized();
    const Eigen::Vector3d b = Eigen::Vector3d(-0.5, 0.1, 0.7).normalized();
    CHECK(vertical_shift(a, b) == vertical_shift(b, a));
  }
  SUBCASE("never reoriented: no flags") {
    CHECK(detect_dpc(walking(20.0, 1.8)).empty());
  }
  SUBCASE("vertical rotated by 90 deg raises the flag, then releases it") {
    auto stream = walking(12.0, 1.8);
    for (auto& s : stream) {
      const double a = std::clamp((s.t - 5.0) / 1.0, 0.0, 1.0) * kPi / 2;
      s.accel = Eigen::AngleAxisd(a, Eigen::Vector3d::UnitX()).toRotationMatrix() * s.accel;
    }
    DpcDetector det;
    double max_alpha = 0.0;
    std::vector<DpcFlag> flags;
    for (const auto& s : stream) {
      if (auto f = det.push(s.t, s.accel)) flags.push_back(*f);
      max_alpha = std::max(max_alpha, det.state().alpha);
    }
    CHECK(max_alpha > 1.4);
    REQUIRE(flags.size() == 2);
    CHECK(flags[0] == DpcFlag::InProgress);
    CHECK(flags[1] == DpcFlag::Stable);
  }
  SUBCASE("pure yaw turns keep the body-frame vertical") {
    auto stream = walking(20.0, 1.8);
    for (auto& s : stream) {
      const double yaw = 0.5 * s.t;
      s.accel = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix() * s.accel;
      s.gyro = Eigen::Vector3d(0, 0, 0.5);
    }
    CHECK(detect_dpc(stream).empty());
  }
  SUBCASE("short stream rejected") {
    CHECK_THROWS_AS(detect_dpc(walking(1.5, 1.8)), Error);
  }
}

TEST_CASE("barometric altitude") {
  SUBCASE("constant pressure: zero variation after settling") {
    const auto out = update_altitude(pressure_trace(60.0, [](double) { return 0.0; }), 10.0);
    for (const auto& s : out)
      if (s.t > 10.0) CHECK(std::abs(s.variation) < 1e-6);
  }
  SUBCASE("slow drift of -0.1 hPa over 20 min is absorbed") {
    std::vector<std::pair<double, double>> p;
    for (int k = 0; k <= 12000; ++k) p.emplace_back(k / 10.0, 1013.25 - 0.1 * (k / 10.0) / 1200.0);
    for (const auto& s : update_altitude(p, 10.0))
      if (s.t > 120.0) CHECK(std::abs(s.variation) < 0.3);
  }
  SUBCASE("3.2 m climb over 15 s peaks at 3.2 +/- 0.4 m") {
    const auto out = update_altitude(pressure_trace(120.0, [](double t) { return ramp(t, 20.0, 15.0, 3.2); }), 10.0);
    double peak = 0.0;
    for (const auto& s : out) peak = std::max(peak, s.variation);
    CHECK(peak == doctest::Approx(3.2).epsilon(0.4 / 3.2));
  }
}

TEST_CASE("floor change detection") {
  const std::vector<double> heights{0.0, 3.2, 6.4};
  SUBCASE("flat walk: no event") {
    const auto alt = update_altitude(pressure_trace(120.0, [](double) { return 0.0; }), 10.0);
    CHECK(detect_floor_change(alt, 0, heights).empty());
  }
  SUBCASE("3.2 m climb from floor 0 reaches floor 1") {
    const auto alt = update_altitude(pressure_trace(60.0, [](double t) { return ramp(t, 10.0, 12.0, 3.2); }), 10.0);
    const auto ev = detect_floor_change(alt, 0, heights);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].new_floor == 1);
    CHECK(ev[0].t > 22.0);
    CHECK(ev[0].latency > 0.0);
    CHECK(ev[0].t - ev[0].latency < 24.0);
  }
  SUBCASE("6.4 m descent from floor 2 reaches floor 0") {
    const auto alt =
        update_altitude(pressure_trace(80.0, [](double t) { return 6.4 - ramp(t, 10.0, 25.0, 6.4); }), 10.0);
    const auto ev = detect_floor_change(alt, 2, heights);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].new_floor == 0);
    CHECK(ev[0].delta_altitude == doctest::Approx(-6.4).epsilon(0.1));
  }
  SUBCASE("drift up to 0.5 hPa per hour never triggers over an hour") {
    for (double rate : {0.5, -0.5, 0.2}) {
      std::vector<std::pair<double, double>> p;
      for (int k = 0; k <= 36000; ++k) p.emplace_back(k / 10.0, 1013.25 + rate * (k / 10.0) / 3600.0);
      CHECK(detect_floor_change(update_altitude(p, 10.0), 1, heights).empty());
    }
  }
  SUBCASE("a climb above the top floor is an unknown floor") {
    const auto alt = update_altitude(pressure_trace(60.0, [](double t) { return ramp(t, 10.0, 15.0, 6.4); }), 10.0);
    CHECK_THROWS_AS(detect_floor_change(alt, 2, heights), Error);
  }
}

TEST_CASE("pipeline turns walking IMU data into steps with headings") {
  PdrConfig cfg;
  PdrPipeline pipe(cfg, {0.0, 3.5}, 0);
  std::vector<PdrEvent> events;
  const double yaw_rate = 0.2;
  for (int k = 0; k < 2000; ++k) {
    const double t = k / kFs;
    ImuSample s;
    s.t = t;
    s.accel = Eigen::Vector3d(0, 0, kGravity + (t > 2.0 ? 2.0 * std::sin(2 * kPi * 1.8 * t) : 0.0));
    s.gyro = Eigen::Vector3d(0, 0, t > 10.0 ? yaw_rate : 0.0);
    pipe.push(s, events);
  }
  std::vector<StepEvent> steps;
  for (const auto& e : events)
    if (const auto* st = std::get_if<StepEvent>(&e)) steps.push_back(*st);
  CHECK(steps.size() >= 30);
  for (const auto& st : steps) {
    CHECK(st.length > 0.5);
    CHECK(st.length < 0.9);
    if (st.t < 9.5) CHECK(std::abs(st.heading) < 1e-3);
    if (st.t > 12.0) CHECK(st.heading == doctest::Approx(yaw_rate * (st.t - 10.0)).epsilon(0.02));
  }
}
