#include "flp/harness/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flp/common/lcg.hpp"
#include "flp/map/collision.hpp"

namespace flp::harness {

namespace {

using map::Point2;

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (std::abs(v) <= 1e-12 * (b - a).norm() * (c - a).norm()) return 0;
  return v > 0.0 ? 1 : -1;
}

bool within(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

double project(const map::Segment& s, Point2 p) {
  const Point2 d = s.b - s.a;
  return (p - s.a).dot(d) / d.dot(d);
}

}  // namespace

OracleHit naive_collision_oracle(const map::Segment& disp, std::span<const map::Segment> walls) {
  OracleHit best;
  if (disp.a == disp.b) {
    // A point only collides with a wall it lies on.
    for (std::size_t i = 0; i < walls.size(); ++i)
      if (orientation(walls[i].a, walls[i].b, disp.a) == 0 && within(walls[i].a, walls[i].b, disp.a)) {
        best.hit = true;
        best.wall = i;
        best.point = disp.a;
        break;
      }
    return best;
  }
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto& w = walls[i];
    const int o1 = orientation(disp.a, disp.b, w.a);
    const int o2 = orientation(disp.a, disp.b, w.b);
    const int o3 = orientation(w.a, w.b, disp.a);
    const int o4 = orientation(w.a, w.b, disp.b);

    double t = 0.0;
    if (o1 == 0 && o2 == 0) {
      // Collinear: overlap of the two parameter intervals along disp.
      const double ta = project(disp, w.a);
      const double tb = project(disp, w.b);
      const double lo = std::max(0.0, std::min(ta, tb));
      const double hi = std::min(1.0, std::max(ta, tb));
      if (lo > hi) continue;
      t = lo;
    } else if (o1 * o2 < 0 && o3 * o4 < 0) {
      // Proper crossing or an endpoint touching the other segment.
      const Point2 r = disp.b - disp.a;
      const Point2 s = w.b - w.a;
      t = std::clamp((w.a - disp.a).cross(s) / r.cross(s), 0.0, 1.0);
    } else if (o1 == 0 && within(disp.a, disp.b, w.a)) {
      t = project(disp, w.a);
    } else if (o2 == 0 && within(disp.a, disp.b, w.b)) {
      t = project(disp, w.b);
    } else if (o3 == 0 && within(w.a, w.b, disp.a)) {
      t = 0.0;
    } else if (o4 == 0 && within(w.a, w.b, disp.b)) {
      t = 1.0;
    } else {
      continue;
    }
    if (!best.hit || t < best.t) {
      best.hit = true;
      best.t = t;
      best.wall = i;
      best.point = disp.at(t);
    }
  }
  return best;
}

namespace {

map::Point2 random_point(Lcg& rng, double lo, double hi) { return {rng.uniform(lo, hi), rng.uniform(lo, hi)}; }

map::Point2 random_offset(Lcg& rng, double max_len) {
  const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = rng.uniform(0.0, max_len);
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace

OracleSweepReport oracle_sweep(std::size_t scenes, std::uint32_t seed) {
  Lcg rng(seed);
  OracleSweepReport report;
  const auto policy = map::CorrectionPolicy::disabled();
  for (std::size_t k = 0; k < scenes; ++k) {
    const Point2 a = random_point(rng, 0.0, 10.0);
    const map::Segment disp{a, a + random_offset(rng, 3.0)};
    const std::size_t n = 1 + rng.index(12);
    std::vector<map::Wall> walls;
    walls.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mode = rng.uniform();
      if (mode < 0.1) {
        // Wall through a point of the displacement, possibly at its end.
        const Point2 p = disp.at(rng.uniform() < 0.5 ? rng.uniform() : std::round(rng.uniform()));
        walls.emplace_back(p, p + random_offset(rng, 2.0));
      } else if (mode < 0.15) {
        // Collinear piece along the displacement line.
        const Point2 p = disp.at(rng.uniform(-0.5, 1.5));
        walls.emplace_back(p, disp.at(rng.uniform(-0.5, 1.5)));
        if (walls.back().seg.length() == 0.0) walls.back() = map::Wall(p, p + Point2{0.5, 0.0});
      } else {
        const Point2 p = random_point(rng, 0.0, 10.0);
        walls.emplace_back(p, p + random_offset(rng, 2.5));
      }
    }
    std::vector<const map::Wall*> ptrs;
    std::vector<map::Segment> segs;
    for (const auto& w : walls) {
      ptrs.push_back(&w);
      segs.push_back(w.seg);
    }
    const auto pruned = map::collision_query(disp, ptrs, policy);
    const auto oracle = naive_collision_oracle(disp, segs);
    ++report.scenes;
    if (oracle.hit) ++report.hits;
    const bool killed = pruned.kind == map::CollisionVerdict::Kind::Kill;
    if (killed != oracle.hit) {
      ++report.disagreements;
    } else if (killed) {
      report.max_point_error = std::max(report.max_point_error, map::distance(pruned.hit, oracle.point));
    }
  }
  return report;
}

map::Partition pruning_benchmark_partition(std::uint32_t seed) {
  Lcg rng(seed);
  map::Partition part;
  part.id = 0;
  part.bounds = map::AxisBox::around({0.0, 0.0}, {30.0, 30.0});
  // Axis-aligned wall pieces on a 3 m grid, like room partitions.
  while (part.walls.size() < 100) {
    const double gx = 3.0 * static_cast<double>(rng.index(11));
    const double gy = 3.0 * static_cast<double>(rng.index(10));
    const double len = 1.0 + 2.0 * rng.uniform();
    if (rng.uniform() < 0.5)
      part.walls.emplace_back(Point2{gx, gy}, Point2{gx, std::min(30.0, gy + len)});
    else
      part.walls.emplace_back(Point2{gy, gx}, Point2{std::min(30.0, gy + len), gx});
  }
  return part;
}

PruningReport pruning_benchmark(std::size_t queries, std::uint32_t seed) {
  const map::Partition part = pruning_benchmark_partition(seed);
  Lcg rng(seed ^ 0x9e3779b9u);
  PruningReport report;
  const auto policy = map::CorrectionPolicy::disabled();
  for (std::size_t q = 0; q < queries; ++q) {
    const Point2 a = random_point(rng, 0.0, 30.0);
    const map::Segment disp{a, a + random_offset(rng, 2.5)};
    map::CollisionStats stats;
    map::collision_query(disp, part, policy, &stats);
    ++report.queries;
    report.pruned_exact_tests += stats.exact_tests;
    report.naive_exact_tests += part.walls.size();
  }
  return report;
}

}  // namespace flp::harness
