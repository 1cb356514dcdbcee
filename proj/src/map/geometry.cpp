#include "flp/map/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace flp::map {

namespace {

constexpr double kOrientEps = 1e-12;

// Sign of (b - a) x (c - a), zero within a relative tolerance.
int orientation(Point2 a, Point2 b, Point2 c) noexcept {
  const Point2 ab = b - a;
  const Point2 ac = c - a;
  const double v = ab.cross(ac);
  if (std::abs(v) <= kOrientEps * ab.norm() * ac.norm()) return 0;
  return v > 0.0 ? 1 : -1;
}

bool in_box(Point2 a, Point2 b, Point2 p) noexcept {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

double param(const Segment& s, Point2 p) noexcept {
  const Point2 d = s.delta();
  const double dd = d.squared_norm();
  return dd > 0.0 ? (p - s.a).dot(d) / dd : 0.0;
}

}  // namespace

std::optional<SegmentHit> intersect(const Segment& p, const Segment& w) noexcept {
  const int o1 = orientation(p.a, p.b, w.a);
  const int o2 = orientation(p.a, p.b, w.b);
  const int o3 = orientation(w.a, w.b, p.a);
  const int o4 = orientation(w.a, w.b, p.b);

  double t = 0.0;
  bool collinear = false;
  if (o1 == 0 && o2 == 0) {
    const double ta = param(p, w.a);
    const double tb = param(p, w.b);
    const double lo = std::max(0.0, std::min(ta, tb));
    const double hi = std::min(1.0, std::max(ta, tb));
    if (lo > hi) return std::nullopt;
    t = lo;
    collinear = true;
  } else if (o1 * o2 < 0 && o3 * o4 < 0) {
    const Point2 r = p.delta();
    const Point2 s = w.delta();
    t = std::clamp((w.a - p.a).cross(s) / r.cross(s), 0.0, 1.0);
  } else if (o1 == 0 && in_box(p.a, p.b, w.a)) {
    t = param(p, w.a);
  } else if (o2 == 0 && in_box(p.a, p.b, w.b)) {
    t = param(p, w.b);
  } else if (o3 == 0 && in_box(w.a, w.b, p.a)) {
    t = 0.0;
  } else if (o4 == 0 && in_box(w.a, w.b, p.b)) {
    t = 1.0;
  } else {
    return std::nullopt;
  }
  t = std::clamp(t, 0.0, 1.0);
  const Point2 point = p.at(t);
  return SegmentHit{point, t, std::clamp(param(w, point), 0.0, 1.0), collinear};
}

bool segment_touches_box(const Segment& s, const AxisBox& box) noexcept {
  if (!s.bbox().overlaps(box)) return false;
  if (box.contains(s.a) || box.contains(s.b)) return true;
  const Point2 d = s.delta();
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {s.a.x - box.min.x, box.max.x - s.a.x, s.a.y - box.min.y, box.max.y - s.a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

double point_segment_distance(Point2 p, const Segment& s) noexcept {
  const Point2 d = s.delta();
  const double len2 = d.squared_norm();
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return distance(p, s.at(t));
}

}  // namespace flp::map
