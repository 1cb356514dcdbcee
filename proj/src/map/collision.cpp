#include "flp/map/collision.hpp"

#include <cmath>

namespace flp::map {

std::vector<std::size_t> prune_candidates(const Segment& disp, const Partition& partition) {
  const AxisBox box = disp.bbox();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < partition.walls.size(); ++i)
    if (partition.walls[i].bbox.overlaps(box)) out.push_back(i);
  return out;
}

namespace {

struct FirstHit {
  const Wall* wall = nullptr;
  SegmentHit hit;
};

FirstHit first_hit(const Segment& disp, std::span<const Wall* const> walls, CollisionStats* stats) {
  const AxisBox box = disp.bbox();
  FirstHit best;
  for (const Wall* w : walls) {
    if (stats) ++stats->bbox_tests;
    if (!w->bbox.overlaps(box)) continue;
    if (stats) ++stats->exact_tests;
    if (auto h = intersect(disp, w->seg)) {
      if (!best.wall || h->t < best.hit.t) {
        best.wall = w;
        best.hit = *h;
      }
    }
  }
  return best;
}

}  // namespace

CollisionVerdict collision_query(const Segment& disp, std::span<const Wall* const> walls,
                                 const CorrectionPolicy& policy, CollisionStats* stats) {
  CollisionVerdict v;
  const FirstHit first = first_hit(disp, walls, stats);
  if (!first.wall) return v;

  v.wall = first.wall;
  v.hit = first.hit.point;
  v.hit_fraction = first.hit.t;
  v.kind = CollisionVerdict::Kind::Kill;
  if (!policy.enabled || first.hit.collinear) return v;

  const Point2 r = disp.delta();
  const double len = r.norm();
  const Segment& ws = first.wall->seg;
  const Point2 s = ws.delta();
  const double s_len = s.norm();
  const Point2 s_hat = s * (1.0 / s_len);
  const Point2 r_hat = r * (1.0 / len);

  // Side of the wall's supporting line the particle comes from.
  const double side = s_hat.cross(disp.a - ws.a);
  if (side == 0.0) return v;
  const Point2 normal = side > 0.0 ? Point2{-s_hat.y, s_hat.x} : Point2{s_hat.y, -s_hat.x};

  const double incidence = std::acos(std::min(1.0, std::abs(r_hat.dot(s_hat))));
  Point2 end;
  if (incidence < policy.grazing_angle) {
    const Point2 remainder = r * (1.0 - first.hit.t);
    end = first.hit.point + normal * policy.wall_margin + s_hat * remainder.dot(s_hat);
  } else if (first.hit.t > policy.head_on_fraction) {
    const double travel = first.hit.t * len - policy.wall_margin;
    end = travel > 0.0 ? disp.a + r_hat * travel : disp.a;
  } else {
    return v;
  }

  // The corrected segment must be clear of every wall, not only the trigger.
  const Segment corrected{disp.a, end};
  if (corrected.length() > 0.0) {
    const FirstHit again = first_hit(corrected, walls, stats);
    if (again.wall) {
      v.wall = again.wall;
      v.hit = again.hit.point;
      v.hit_fraction = again.hit.t;
      return v;
    }
  }
  v.kind = CollisionVerdict::Kind::Corrected;
  v.new_disp = corrected;
  return v;
}

CollisionVerdict collision_query(const Segment& disp, const Partition& partition, const CorrectionPolicy& policy,
                                 CollisionStats* stats) {
  std::vector<const Wall*> ptrs;
  ptrs.reserve(partition.walls.size());
  for (const auto& w : partition.walls) ptrs.push_back(&w);
  return collision_query(disp, ptrs, policy, stats);
}

}  // namespace flp::map
