#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "flp/common/error.hpp"
#include "flp/common/lcg.hpp"
#include "flp/harness/oracle.hpp"
#include "flp/map/collision.hpp"
#include "flp/map/map_io.hpp"
#include "flp/map/partition_cache.hpp"
#include "flp/map/partitioning.hpp"
#include "support.hpp"

using namespace flp;
using namespace flp::map;

namespace {

Segment random_segment(Lcg& rng, double span, double max_len) {
  const Point2 a{rng.uniform(0.0, span), rng.uniform(0.0, span)};
  const double ang = rng.uniform(0.0, 6.283185307179586);
  const double len = rng.uniform(0.01, max_len);
  return {a, a + Point2{len * std::cos(ang), len * std::sin(ang)}};
}

// Parametric-form solver: solves a + t r = c + u s by Cramer's rule.
std::optional<Point2> parametric_solve(const Segment& p, const Segment& w) {
  const double r1 = p.b.x - p.a.x, r2 = p.b.y - p.a.y;
  const double s1 = w.b.x - w.a.x, s2 = w.b.y - w.a.y;
  const double det = -r1 * s2 + s1 * r2;
  if (std::abs(det) < 1e-12) return std::nullopt;
  const double q1 = w.a.x - p.a.x, q2 = w.a.y - p.a.y;
  const double t = (-q1 * s2 + s1 * q2) / det;
  const double u = (r1 * q2 - r2 * q1) / det;
  if (t < -1e-9 || t > 1 + 1e-9 || u < -1e-9 || u > 1 + 1e-9) return std::nullopt;
  return Point2{p.a.x + t * r1, p.a.y + t * r2};
}

std::string error_text(const std::function<void()>& fn, ErrorCode expected) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == expected);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

}  // namespace

TEST_CASE("segment intersection: perpendicular crossing and parallel miss") {
  const auto hit = segment_intersect({{0, 0}, {2, 0}}, {{1, -1}, {1, 1}});
  REQUIRE(hit);
  CHECK(hit->x == doctest::Approx(1.0));
  CHECK(hit->y == doctest::Approx(0.0));
  CHECK_FALSE(segment_intersect({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
}

TEST_CASE("segment intersection: endpoint contact and collinear overlap count as hits") {
  CHECK(segment_intersect({{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}));
  const auto h = intersect({{0, 0}, {4, 0}}, {{3, 0}, {1, 0}});
  REQUIRE(h);
  CHECK(h->collinear);
  CHECK(h->point.x == doctest::Approx(1.0));
  CHECK_FALSE(segment_intersect({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}));
}

TEST_CASE("segment intersection agrees with a parametric solver on random pairs") {
  Lcg rng(11);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Segment p = random_segment(rng, 10.0, 6.0);
    const Segment w = random_segment(rng, 10.0, 6.0);
    const auto ours = segment_intersect(p, w);
    const auto ref = parametric_solve(p, w);
    REQUIRE(ours.has_value() == ref.has_value());
    if (ours) {
      ++hits;
      CHECK(distance(*ours, *ref) < 1e-9);
    }
  }
  CHECK(hits > 20);
}

TEST_CASE("segment intersection is symmetric for pairs in general position") {
  Lcg rng(12);
  for (int i = 0; i < 2000; ++i) {
    const Segment p = random_segment(rng, 10.0, 6.0);
    const Segment w = random_segment(rng, 10.0, 6.0);
    const auto a = segment_intersect(p, w);
    const auto b = segment_intersect(w, p);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(distance(*a, *b) < 1e-9);
  }
}

TEST_CASE("prune_candidates keeps every wall that is hit") {
  Partition part;
  part.bounds = AxisBox::around({0, 0}, {10, 10});
  part.walls.emplace_back(Point2{8, 8}, Point2{9, 9});
  SUBCASE("disjoint boxes give an empty list") {
    CHECK(prune_candidates({{0, 0}, {1, 1}}, part).empty());
  }
  SUBCASE("all overlapping boxes give every wall") {
    part.walls.emplace_back(Point2{0, 9}, Point2{9, 0});
    CHECK(prune_candidates({{0, 0}, {10, 10}}, part).size() == 2);
  }
  SUBCASE("random scenes: superset of the exact hit set, subset of the walls") {
    Lcg rng(5);
    for (int scene = 0; scene < 10000; ++scene) {
      Partition p;
      const std::size_t n = 1 + rng.index(20);
      for (std::size_t i = 0; i < n; ++i) {
        const Segment s = random_segment(rng, 10.0, 4.0);
        p.walls.emplace_back(s.a, s.b);
      }
      const Segment disp = random_segment(rng, 10.0, 3.0);
      const auto pruned = prune_candidates(disp, p);
      const std::set<std::size_t> kept(pruned.begin(), pruned.end());
      CHECK(kept.size() == pruned.size());
      for (std::size_t i = 0; i < p.walls.size(); ++i)
        if (segment_intersect(disp, p.walls[i].seg)) REQUIRE(kept.count(i) == 1);
      for (std::size_t i : pruned) REQUIRE(i < p.walls.size());
    }
  }
}

TEST_CASE("collision_query verdicts") {
  Partition part;
  part.bounds = AxisBox::around({-10, -10}, {10, 10});
  const CorrectionPolicy policy;

  SUBCASE("no walls: no hit") {
    CHECK(collision_query({{0, 0}, {1, 1}}, part, policy).kind == CollisionVerdict::Kind::NoHit);
  }
  part.walls.emplace_back(Point2{1, -5}, Point2{1, 5});
  SUBCASE("head-on crossing at half the displacement is killed") {
    const auto v = collision_query({{0, 0}, {2, 0}}, part, policy);
    CHECK(v.kind == CollisionVerdict::Kind::Kill);
    CHECK(v.hit_fraction == doctest::Approx(0.5));
  }
  SUBCASE("head-on hit near the end is truncated before the wall") {
    const auto v = collision_query({{0, 0}, {1.1, 0}}, part, policy);
    REQUIRE(v.kind == CollisionVerdict::Kind::Corrected);
    CHECK(v.new_disp.b.x == doctest::Approx(1.0 - policy.wall_margin));
    CHECK_FALSE(segment_intersect(v.new_disp, part.walls[0].seg));
  }
  SUBCASE("10 degree incidence slides along the wall and stays clear of it") {
    const double a = deg2rad(10.0);
    const Segment disp{{0.8, 0}, {0.8 + 2.0 * std::sin(a), 2.0 * std::cos(a)}};
    const auto v = collision_query(disp, part, policy);
    REQUIRE(v.kind == CollisionVerdict::Kind::Corrected);
    CHECK_FALSE(segment_intersect(v.new_disp, part.walls[0].seg));
    CHECK(v.new_disp.b.x < 1.0);
    CHECK(v.new_disp.b.y == doctest::Approx(2.0 * std::cos(a)).epsilon(1e-9));
    const std::vector<const Wall*> only{&part.walls[0]};
    CHECK(collision_query(v.new_disp, only, policy).kind == CollisionVerdict::Kind::NoHit);
  }
  SUBCASE("disabled corrections kill every hit") {
    const auto v = collision_query({{0, 0}, {1.1, 0}}, part, CorrectionPolicy::disabled());
    CHECK(v.kind == CollisionVerdict::Kind::Kill);
  }
}

TEST_CASE("corrected displacements never cross the triggering wall (random property)") {
  Lcg rng(21);
  const CorrectionPolicy policy;
  int corrected = 0;
  for (int scene = 0; scene < 10000; ++scene) {
    Partition p;
    p.bounds = AxisBox::around({-5, -5}, {15, 15});
    const std::size_t n = 1 + rng.index(8);
    for (std::size_t i = 0; i < n; ++i) {
      const Segment s = random_segment(rng, 10.0, 6.0);
      p.walls.emplace_back(s.a, s.b);
    }
    const Segment disp = random_segment(rng, 10.0, 2.5);
    const auto v = collision_query(disp, p, policy);
    if (v.kind != CollisionVerdict::Kind::Corrected) continue;
    ++corrected;
    for (const auto& w : p.walls) REQUIRE_FALSE(segment_intersect(v.new_disp, w.seg));
  }
  CHECK(corrected > 100);
}

TEST_CASE("all-pairs oracle edge cases") {
  CHECK_FALSE(harness::naive_collision_oracle({{0, 0}, {1, 1}}, {}).hit);
  const std::vector<Segment> walls{{{0, -1}, {0, 1}}, {{2, -1}, {2, 1}}};
  CHECK_FALSE(harness::naive_collision_oracle({{1, 0}, {1, 0}}, walls).hit);
  CHECK(harness::naive_collision_oracle({{0, 0.5}, {0, 0.5}}, walls).hit);
  const auto h = harness::naive_collision_oracle({{-1, 0}, {3, 0}}, walls);
  CHECK(h.hit);
  CHECK(h.wall == 0);
  CHECK(h.t == doctest::Approx(0.25));
}

TEST_CASE("pruned collision query matches the all-pairs oracle") {
  const auto sweep = harness::oracle_sweep(10000, 3);
  CHECK(sweep.disagreements == 0);
  CHECK(sweep.max_point_error <= 1e-9);
  CHECK(sweep.hits > 1000);
  CHECK(sweep.hits < 9000);
}

TEST_CASE("compile_partitions") {
  SUBCASE("40 walls fit one partition") {
    std::vector<Wall> walls;
    for (int i = 0; i < 40; ++i) walls.emplace_back(Point2{i * 0.5, 0.0}, Point2{i * 0.5, 1.0});
    PartitioningOptions opt;
    opt.target_area = 1e9;
    const auto parts = compile_partitions(walls, {}, opt);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].walls.size() == 40);
  }
  SUBCASE("250 spread walls: at most 100 per partition, wall set preserved, walls inside bounds") {
    Lcg rng(9);
    std::vector<Wall> walls;
    for (int i = 0; i < 250; ++i) {
      const Segment s = random_segment(rng, 100.0, 3.0);
      walls.emplace_back(s.a, s.b);
    }
    const auto parts = compile_partitions(walls, {});
    REQUIRE(parts.size() > 1);
    std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> in, out;
    for (const auto& w : walls) in.insert({{w.seg.a.x, w.seg.a.y}, {w.seg.b.x, w.seg.b.y}});
    for (const auto& p : parts) {
      CHECK(p.walls.size() <= 100);
      for (const auto& w : p.walls) {
        CHECK(w.bbox.overlaps(p.bounds));
        out.insert({{w.seg.a.x, w.seg.a.y}, {w.seg.b.x, w.seg.b.y}});
      }
    }
    CHECK(in == out);
  }
  SUBCASE("more than max_walls walls through one point cannot be separated") {
    std::vector<Wall> walls;
    for (int i = 0; i < 12; ++i) {
      const double a = i * 0.5;
      walls.emplace_back(Point2{0, 0}, Point2{std::cos(a), std::sin(a)});
    }
    PartitioningOptions opt;
    opt.max_walls = 10;
    CHECK_THROWS_AS(compile_partitions(walls, {}, opt), Error);
  }
}

TEST_CASE("locate") {
  Floor f;
  for (int id = 1; id <= 3; ++id) {
    Partition p;
    p.id = id;
    p.bounds = AxisBox::around({(id - 1) * 10.0, 0}, {id * 10.0, 10});
    f.partitions.push_back(p);
  }
  CHECK(locate({5, 5}, f) == 1);
  CHECK(locate({20, 3}, f) == 2);  // shared edge of 2 and 3: lowest id
  CHECK_THROWS_AS(locate({31, 3}, f), Error);
  Lcg rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{rng.uniform(0, 30), rng.uniform(0, 10)};
    const int id = locate(p, f);
    CHECK(f.partition(id)->bounds.contains(p));
  }
}

TEST_CASE("partition cache eviction rules") {
  const auto m = test::open_floor(0, 0, 10, 10);
  std::map<int, std::shared_ptr<Partition>> store;
  for (int id = 0; id < 10; ++id) {
    auto p = std::make_shared<Partition>();
    p->id = id;
    store[id] = p;
  }
  PartitionCache cache([&](PartitionKey k) -> std::shared_ptr<const Partition> {
    auto it = store.find(k.id);
    return it == store.end() ? nullptr : it->second;
  });
  std::map<int, std::size_t> occ;
  const OccupancyFn occupancy = [&](PartitionKey k) { return occ.count(k.id) ? occ[k.id] : std::size_t{0}; };

  for (int id = 0; id < 5; ++id) {
    occ[id] = 10;
    CHECK_FALSE(cache.fetch({0, id}, occupancy).evicted);
  }
  SUBCASE("resident id: no eviction") {
    const auto r = cache.fetch({0, 2}, occupancy);
    CHECK(r.partition->id == 2);
    CHECK_FALSE(r.evicted);
    CHECK(cache.loads() == 5);
  }
  SUBCASE("empty slot goes first") {
    occ[3] = 0;
    const auto r = cache.fetch({0, 7}, occupancy);
    REQUIRE(r.evicted);
    CHECK(r.evicted->id == 3);
  }
  SUBCASE("otherwise the minimum occupancy") {
    const std::size_t counts[] = {9, 3, 7, 5, 4};
    for (int id = 0; id < 5; ++id) occ[id] = counts[id];
    const auto r = cache.fetch({0, 8}, occupancy);
    REQUIRE(r.evicted);
    CHECK(r.evicted->id == 1);
    CHECK(cache.size() == 5);
  }
  SUBCASE("a missing partition fails to load") {
    CHECK_THROWS_AS(cache.fetch({0, 42}, occupancy), Error);
  }
}

TEST_CASE("partition cache random operation sequences stay within capacity") {
  Lcg rng(77);
  PartitionCache cache([](PartitionKey k) {
    auto p = std::make_shared<Partition>();
    p->id = k.id;
    return std::shared_ptr<const Partition>(p);
  });
  std::map<int, std::size_t> occ;
  const OccupancyFn occupancy = [&](PartitionKey k) { return occ[k.id]; };
  for (int op = 0; op < 100000; ++op) {
    if (rng.uniform() < 0.3) {
      occ[static_cast<int>(rng.index(20))] = rng.index(4) == 0 ? 0 : rng.index(50);
      continue;
    }
    const auto before = cache.keys();
    const int id = static_cast<int>(rng.index(20));
    const auto r = cache.fetch({0, id}, occupancy);
    REQUIRE(cache.size() <= 5);
    if (r.evicted) {
      std::size_t min_occ = SIZE_MAX;
      bool any_empty = false;
      for (const auto& k : before) {
        min_occ = std::min(min_occ, occ[k.id]);
        any_empty = any_empty || occ[k.id] == 0;
      }
      if (any_empty)
        REQUIRE(occ[r.evicted->id] == 0);
      else
        REQUIRE(occ[r.evicted->id] == min_occ);
    }
  }
}

TEST_CASE("map JSON round trip and validation messages") {
  const std::string text = R"({
  "name": "t",
  "floors": [
    {"height": 0.0,
     "walls": [[[0, 0], [10, 0]], [[10, 0], [10, 10]]],
     "zones": [{"kind": "stairway", "polygon": [[1, 1], [3, 1], [3, 3]], "step_length": 0.3, "exits": [[2, 4]]}],
     "beacons": [{"id": "b1", "position": [5, 5]}]},
    {"height": 3.0, "walls": [[[0, 0], [10, 0]]]}
  ]
})";
  const MapModel m = parse_map(text, "t.json");
  CHECK(m.floors.size() == 2);
  CHECK(m.find_beacon("b1"));
  CHECK(m.floor(0).zones[0].exit_points.size() == 1);
  const MapModel again = parse_map(to_json(m).dump(), "again.json");
  CHECK(again.floors[0].wall_count() == m.floors[0].wall_count());
  CHECK(to_json(again) == to_json(m));

  SUBCASE("zero-length wall names file, line and pointer") {
    const std::string bad = R"({"floors": [{"height": 0,
  "walls": [[[0, 0], [1, 0]], [[2, 2], [2, 2]]]}]})";
    const auto msg = error_text([&] { parse_map(bad, "bad.json"); }, ErrorCode::InvalidMap);
    CHECK(msg.find("bad.json:2") != std::string::npos);
    CHECK(msg.find("/floors/0/walls/1") != std::string::npos);
  }
  SUBCASE("heights must increase") {
    const std::string bad = R"({"floors": [{"height": 3, "walls": [[[0, 0], [1, 0]]]},
      {"height": 3, "walls": [[[0, 0], [1, 0]]]}]})";
    const auto msg = error_text([&] { parse_map(bad, "h.json"); }, ErrorCode::InvalidMap);
    CHECK(msg.find("/floors/1") != std::string::npos);
  }
  SUBCASE("stairway without exits") {
    const std::string bad = R"({"floors": [{"height": 0, "walls": [[[0, 0], [1, 0]]],
      "zones": [{"kind": "stairway", "polygon": [[1, 1], [3, 1], [3, 3]], "step_length": 0.3}]}]})";
    error_text([&] { parse_map(bad, "s.json"); }, ErrorCode::InvalidMap);
  }
  SUBCASE("partition over max_walls") {
    std::string walls;
    for (int i = 0; i < 4; ++i) walls += (i ? "," : "") + std::string("[[0,") + std::to_string(i) + "],[1," + std::to_string(i) + "]]";
    const std::string bad = R"({"partitioning": {"max_walls": 3}, "floors": [{"height": 0, "partitions": [{"id": 0, "bounds": [[0,0],[5,5]], "walls": [)" +
                            walls + "]}]}]}";
    const auto msg = error_text([&] { parse_map(bad, "p.json"); }, ErrorCode::InvalidMap);
    CHECK(msg.find("/floors/0/partitions/0/walls") != std::string::npos);
  }
  SUBCASE("malformed JSON") {
    CHECK_THROWS_AS(parse_map("{\"floors\": [", "m.json"), Error);
  }
}
