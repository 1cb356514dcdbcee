#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flp/common/error.hpp"
#include "flp/measurements/models.hpp"

using namespace flp;
using namespace flp::measurements;

namespace {

map::Beacon beacon_at(Point2 p) { return {"b", p, 0, map::BeaconKind::BLE}; }

}  // namespace

TEST_CASE("path-loss model values") {
  const RssModelParams p;
  const auto b = beacon_at({0, 0});
  CHECK(rss_predict({10, 0}, b, p) == doctest::Approx(-63.4).epsilon(1e-12));
  CHECK(rss_predict({35, 0}, b, p) == doctest::Approx(-86.9).epsilon(1e-12));
  CHECK(rss_predict({0, 50}, b, p) == doctest::Approx(-86.9).epsilon(1e-12));
  // The far branch starts 0.87 dB above where the near branch ends.
  CHECK(rss_at_distance(35.0, p) == doctest::Approx(-86.9));
  CHECK(rss_at_distance(std::nextafter(35.0, 36.0), p) == doctest::Approx(-86.03).epsilon(1e-9));
}

TEST_CASE("path-loss model is non-increasing within each branch") {
  const RssModelParams p;
  double prev = rss_at_distance(0.0, p);
  for (int i = 1; i <= 20000; ++i) {
    const double d = i * 0.01;
    const double v = rss_at_distance(d, p);
    if (std::abs(d - 35.01) > 1e-9) CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("RSS likelihood") {
  const RssModelParams p;
  const auto b = beacon_at({0, 0});
  const Point2 x{10, 0};
  CHECK(rss_likelihood(-63.4, x, b, p) == doctest::Approx(0.039894228040143274).epsilon(1e-9));
  CHECK(rss_likelihood(-53.4, x, b, p) == doctest::Approx(0.02419707245191434).epsilon(1e-9));
  CHECK(rss_likelihood(-73.4, x, b, p) == doctest::Approx(0.02419707245191434).epsilon(1e-9));
  double prev = rss_likelihood(-63.4, x, b, p);
  for (int i = 1; i < 100; ++i) {
    const double l = rss_likelihood(-63.4 - i * 0.5, x, b, p);
    CHECK(l < prev);
    prev = l;
  }
  CHECK(rss_log_factor(-53.4, x, b, p) == doctest::Approx(-0.5));

  // Trapezoidal quadrature over the residual.
  double integral = 0.0;
  const double h = 0.01;
  for (double z = -163.4; z < 36.6; z += h)
    integral += 0.5 * h * (rss_likelihood(z, x, b, p) + rss_likelihood(z + h, x, b, p));
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));

  map::MapModel m;
  CHECK_THROWS_AS(rss_likelihood(RssObservation{0, "nope", -60}, x, m, p), Error);
}

TEST_CASE("GNSS likelihood") {
  const GnssFix z{0.0, {3, 4}, 5.0};
  CHECK(gnss_likelihood(z, {3, 4}) == doctest::Approx(0.006366197723675813).epsilon(1e-9));
  CHECK(gnss_likelihood(z, {8, 4}) == doctest::Approx(0.006366197723675813 * std::exp(-0.5)).epsilon(1e-9));
  CHECK(gnss_likelihood(z, {3, 9}) == gnss_likelihood(z, {-2, 4}));
  CHECK(gnss_log_factor(z, {3, 9}) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(gnss_likelihood(GnssFix{0.0, {0, 0}, 0.0}, {0, 0}), Error);

  double integral = 0.0;
  const double h = 0.1;
  for (double x = -40; x < 46; x += h)
    for (double y = -40; y < 46; y += h) integral += h * h * gnss_likelihood(z, {x + h / 2, y + h / 2});
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("likelihoods are invariant under joint translation") {
  const RssModelParams p;
  const Point2 shift{123.25, -77.5};
  for (int i = 0; i < 100; ++i) {
    const Point2 x{i * 0.7, 20.0 - i * 0.3};
    const auto b = beacon_at({5, 5});
    const auto bt = beacon_at(Point2{5, 5} + shift);
    CHECK(rss_likelihood(-70.0, x, b, p) == doctest::Approx(rss_likelihood(-70.0, x + shift, bt, p)).epsilon(1e-12));
    const GnssFix z{0.0, {1, 2}, 4.0};
    const GnssFix zt{0.0, Point2{1, 2} + shift, 4.0};
    CHECK(gnss_likelihood(z, x) == doctest::Approx(gnss_likelihood(zt, x + shift)).epsilon(1e-12));
  }
}

TEST_CASE("model parameter validation") {
  RssModelParams p;
  p.sigma = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
}
