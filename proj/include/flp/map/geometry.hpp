#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace flp::map {

/// Planar point in floor-local meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 operator+(Point2 o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(Point2 o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Point2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr bool operator==(const Point2&) const noexcept = default;

  constexpr double dot(Point2 o) const noexcept { return x * o.x + y * o.y; }
  constexpr double cross(Point2 o) const noexcept { return x * o.y - y * o.x; }
  double norm() const noexcept { return std::sqrt(x * x + y * y); }
  constexpr double squared_norm() const noexcept { return x * x + y * y; }
  bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Point2 a, Point2 b) noexcept { return (a - b).norm(); }

struct AxisBox {
  Point2 min;
  Point2 max;

  static constexpr AxisBox around(Point2 a, Point2 b) noexcept {
    return {{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
  }
  static constexpr AxisBox empty() noexcept { return {{1e300, 1e300}, {-1e300, -1e300}}; }

  constexpr bool is_empty() const noexcept { return min.x > max.x || min.y > max.y; }
  constexpr bool overlaps(const AxisBox& o) const noexcept {
    return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y;
  }
  constexpr bool contains(Point2 p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  constexpr double width() const noexcept { return max.x - min.x; }
  constexpr double height() const noexcept { return max.y - min.y; }
  constexpr double area() const noexcept { return is_empty() ? 0.0 : width() * height(); }

  constexpr void expand(Point2 p) noexcept {
    min = {std::min(min.x, p.x), std::min(min.y, p.y)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y)};
  }
  constexpr void expand(const AxisBox& o) noexcept {
    if (o.is_empty()) return;
    expand(o.min);
    expand(o.max);
  }
  constexpr AxisBox inflated(double margin) const noexcept {
    return {{min.x - margin, min.y - margin}, {max.x + margin, max.y + margin}};
  }
};

struct Segment {
  Point2 a;
  Point2 b;

  constexpr Point2 delta() const noexcept { return b - a; }
  double length() const noexcept { return delta().norm(); }
  constexpr AxisBox bbox() const noexcept { return AxisBox::around(a, b); }
  constexpr Point2 at(double t) const noexcept { return a + (b - a) * t; }
};

/// Intersection with its parameters along both segments (point = p.at(t) = w.at(u)).
struct SegmentHit {
  Point2 point;
  double t = 0.0;  // along the first segment
  double u = 0.0;  // along the second segment
  bool collinear = false;
};

/// Closed-segment intersection. Collinear overlaps count as intersecting and
/// report the overlap point closest to p.a.
std::optional<SegmentHit> intersect(const Segment& p, const Segment& w) noexcept;

inline std::optional<Point2> segment_intersect(const Segment& p, const Segment& w) noexcept {
  if (auto hit = intersect(p, w)) return hit->point;
  return std::nullopt;
}

/// True iff the closed segment touches the closed box (Liang-Barsky clip).
bool segment_touches_box(const Segment& s, const AxisBox& box) noexcept;

/// Distance from p to the closed segment.
double point_segment_distance(Point2 p, const Segment& s) noexcept;

}  // namespace flp::map
