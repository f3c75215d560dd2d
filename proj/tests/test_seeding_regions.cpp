// Copyright 2026 The mmrplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mmrplan/free_regions.hpp"
#include "mmrplan/narrow_seeding.hpp"
#include "mmrplan/plan_io.hpp"

using namespace mmrplan;

namespace {

StaticObstacle box(int id, double x0, double y0, double x1, double y1) {
  StaticObstacle o;
  o.id = id;
  o.shape = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return o;
}

World open_world(std::vector<StaticObstacle> statics) {
  World w;
  w.bounds = ConvexRegion::from_vertices({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  w.statics = std::move(statics);
  w.start = Point2(1, 1);
  w.goal = Point2(9, 9);
  return w;
}

bool has_edge(const std::vector<GapEdge>& edges, int i, int j) {
  for (const auto& e : edges)
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return true;
  return false;
}

}  // namespace

TEST_CASE("all_gap_edges enumerates unordered pairs") {
  std::vector<StaticObstacle> two = {box(0, 0, 0, 1, 1), box(1, 2, 0, 3, 1)};
  CHECK(all_gap_edges(two).size() == 1);

  std::vector<StaticObstacle> five;
  for (int i = 0; i < 5; ++i) five.push_back(box(i, 3 * i, 0, 3 * i + 1, 1));
  const auto edges = all_gap_edges(five);
  CHECK(edges.size() == 10);
  for (const auto& e : edges) {
    CHECK(e.length == doctest::Approx((e.p_i - e.p_j).norm()));
    // Endpoints on the respective boundaries.
    CHECK(convex_contains(five[e.i].shape, e.p_i, 1e-9));
    CHECK(convex_contains(five[e.j].shape, e.p_j, 1e-9));
  }
}

TEST_CASE("gap edge lengths match a sampling oracle") {
  Rng rng(3);
  std::vector<StaticObstacle> obs = {box(0, 0, 0, 1, 2), box(1, 2.5, 1, 4, 3)};
  const auto edges = all_gap_edges(obs);
  REQUIRE(edges.size() == 1);
  double best = 1e9;
  for (int a = 0; a <= 4000; ++a) {
    // sample both rectangle boundaries
    for (int side = 0; side < 2; ++side) {
      const auto& poly = obs[side].shape;
      const double t = a / 4000.0 * poly.size();
      const size_t e = static_cast<size_t>(t) % poly.size();
      const double frac = t - std::floor(t);
      const Point2 p = poly[e] + frac * (poly[(e + 1) % poly.size()] - poly[e]);
      const Point2 q = closest_point_on_convex(obs[1 - side].shape, p);
      best = std::min(best, (p - q).norm());
    }
  }
  CHECK(std::abs(edges[0].length - best) <= 1e-4);
}

TEST_CASE("connect_static_obstacles on three collinear squares") {
  //  squares with gaps 1.0 and 1.5
  std::vector<StaticObstacle> obs = {box(0, 0, 0, 1, 1), box(1, 2, 0, 3, 1),
                                     box(2, 4.5, 0, 5.5, 1)};
  Rng rng(1);
  const auto connected =
      connect_static_obstacles(obs, all_gap_edges(obs), rng);
  CHECK(has_edge(connected, 0, 1));  // 1.0 gap
  CHECK(has_edge(connected, 1, 2));  // 1.5 gap
  CHECK(connected.front().length == doctest::Approx(1.0));  // initializer
  // Every obstacle appears.
  std::set<int> seen;
  for (const auto& e : connected) {
    seen.insert(e.i);
    seen.insert(e.j);
  }
  CHECK(seen.size() == 3);
}

TEST_CASE("two obstacles produce exactly one connecting edge") {
  std::vector<StaticObstacle> obs = {box(0, 0, 0, 1, 1), box(1, 4, 0, 5, 1)};
  Rng rng(1);
  const auto connected =
      connect_static_obstacles(obs, all_gap_edges(obs), rng);
  CHECK(connected.size() == 1);
  CHECK(connected[0].length == doctest::Approx(3.0));
}

TEST_CASE("random fallback reconnects isolated clusters deterministically") {
  // Two clusters with the inter-cluster edges pruned from the input list;
  // the frontier stalls and the random draw must reseed it.
  std::vector<StaticObstacle> obs = {box(0, 0, 0, 1, 1), box(1, 1.5, 0, 2.5, 1),
                                     box(2, 8, 8, 9, 9), box(3, 8, 6, 9, 7)};
  auto edges = all_gap_edges(obs);
  std::erase_if(edges, [](const GapEdge& e) {
    const bool left_a = e.i <= 1, left_b = e.j <= 1;
    return left_a != left_b;  // drop inter-cluster edges
  });
  Rng rng1(42), rng2(42), rng3(7);
  const auto c1 = connect_static_obstacles(obs, edges, rng1);
  const auto c2 = connect_static_obstacles(obs, edges, rng2);
  REQUIRE(c1.size() == c2.size());
  for (size_t i = 0; i < c1.size(); ++i) {
    CHECK(c1[i].i == c2[i].i);
    CHECK(c1[i].j == c2[i].j);
  }
  std::set<int> seen;
  for (const auto& e : c1) {
    seen.insert(e.i);
    seen.insert(e.j);
  }
  CHECK(seen.size() == 4);  // spans all obstacles
  const auto c3 = connect_static_obstacles(obs, edges, rng3);
  std::set<int> seen3;
  for (const auto& e : c3) {
    seen3.insert(e.i);
    seen3.insert(e.j);
  }
  CHECK(seen3.size() == 4);
}

TEST_CASE("connected edge set forms a single component on full input") {
  Rng rng(5);
  std::vector<StaticObstacle> obs;
  for (int i = 0; i < 7; ++i)
    obs.push_back(box(i, 1.3 * i, 0.9 * ((i * 37) % 5), 1.3 * i + 0.6,
                      0.9 * ((i * 37) % 5) + 0.6));
  const auto connected =
      connect_static_obstacles(obs, all_gap_edges(obs), rng);
  // Union-find over the returned edges.
  std::vector<int> parent(7);
  for (int i = 0; i < 7; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (const auto& e : connected) parent[find(e.i)] = find(e.j);
  std::set<int> roots;
  for (int i = 0; i < 7; ++i) roots.insert(find(i));
  CHECK(roots.size() == 1);
  // No duplicates; all edges from the input list.
  std::set<std::pair<int, int>> uniq;
  for (const auto& e : connected) {
    const auto key = std::minmax(e.i, e.j);
    CHECK_FALSE(uniq.count({key.first, key.second}));
    uniq.insert({key.first, key.second});
  }
}

TEST_CASE("seed_points sorts by gap length and drops blocked midpoints") {
  // Midpoint of the 0-2 edge lies inside obstacle 1.
  std::vector<StaticObstacle> obs = {box(0, 0, 0, 1, 1), box(1, 2, 0, 3, 1),
                                     box(2, 4.5, 0, 5.5, 1)};
  Rng rng(1);
  const SeedList seeds = seed_points(obs, rng);
  REQUIRE(seeds.points.size() >= 2);
  for (size_t i = 1; i < seeds.edge_lengths.size(); ++i)
    CHECK(seeds.edge_lengths[i] >= seeds.edge_lengths[i - 1]);
  CHECK(seeds.points[0].x() == doctest::Approx(1.5));  // 1.0 gap midpoint
  CHECK(seeds.points[1].x() == doctest::Approx(3.75));  // 1.5 gap midpoint
  for (const auto& p : seeds.points)
    for (const auto& o : obs) CHECK_FALSE(convex_contains(o.shape, p, 1e-9));
}

TEST_CASE("two abutting squares give an axis-aligned midpoint seed") {
  std::vector<StaticObstacle> obs = {box(0, 0, 0, 1, 1), box(1, 2, 0, 3, 1)};
  Rng rng(1);
  const SeedList seeds = seed_points(obs, rng);
  REQUIRE(seeds.points.size() == 1);
  CHECK(seeds.points[0].x() == doctest::Approx(1.5));
  CHECK(seeds.points[0].y() >= -1e-9);
  CHECK(seeds.points[0].y() <= 1.0 + 1e-9);
}

TEST_CASE("gap_obstacles adds one strip per boundary face") {
  const World w = open_world({box(0, 4, 4, 6, 6)});
  const auto obs = gap_obstacles(w);
  CHECK(obs.size() == 1 + 4);
  // Strips sit outside the bounds.
  for (size_t i = 1; i < obs.size(); ++i) {
    const Point2 c = polygon_centroid(obs[i].shape);
    CHECK_FALSE(w.bounds.contains(c, 0.0));
  }
}

// ---------------------------------------------------------------------------
// free_regions

TEST_CASE("inflate_region with no obstacles returns the bounds") {
  const World w = open_world({});
  const ConvexRegion r = inflate_region(Point2(5, 5), w.statics, w.bounds);
  CHECK(r.area() == doctest::Approx(w.bounds.area()));
}

TEST_CASE("inflate_region rejects blocked seeds") {
  const World w = open_world({box(0, 4, 4, 6, 6)});
  CHECK_THROWS_AS(inflate_region(Point2(5, 5), w.statics, w.bounds),
                  SeedBlocked);
  CHECK_THROWS_AS(inflate_region(Point2(-1, 5), w.statics, w.bounds),
                  SeedBlocked);
}

TEST_CASE("inflated regions are obstacle free and contain the seed") {
  Rng rng(11);
  const World w = open_world({box(0, 4, 4, 6, 6), box(1, 1, 7, 3, 9),
                              box(2, 7, 1, 9, 2.5)});
  for (int trial = 0; trial < 12; ++trial) {
    Point2 seed(rng.uniform(0.2, 9.8), rng.uniform(0.2, 9.8));
    if (!w.in_free_space(seed, 1e-6)) continue;
    const ConvexRegion r = inflate_region(seed, w.statics, w.bounds);
    CHECK(r.contains(seed, 1e-9));
    // Monte-Carlo disjointness oracle.
    const auto box2 = r.bounding_box();
    for (int s = 0; s < 100000; ++s) {
      const Point2 p(rng.uniform(box2.min().x(), box2.max().x()),
                     rng.uniform(box2.min().y(), box2.max().y()));
      if (!r.contains(p, 0.0)) continue;
      for (const auto& o : w.statics)
        CHECK_FALSE(convex_contains(o.shape, p, -1e-9));
    }
  }
}

TEST_CASE("door seed inflates to a region spanning the door gap") {
  // 1.5 m door between two wall pieces.
  const World w = open_world({box(0, 0, 3.3, 3.5, 3.7), box(1, 5.0, 3.3, 10, 3.7)});
  Rng rng(1);
  const SeedList seeds = seed_points(gap_obstacles(w), rng);
  REQUIRE(!seeds.points.empty());
  const Point2 door_seed = seeds.points.front();
  CHECK(door_seed.x() == doctest::Approx(4.25));
  const ConvexRegion r = inflate_region(door_seed, w.statics, w.bounds);
  CHECK(r.contains(door_seed, 1e-9));
  // Region covers the whole door cross-section segment.
  for (int k = 0; k <= 100; ++k) {
    const double x = 3.5 + 1.5 * k / 100.0;
    CHECK(r.contains(Point2(x, door_seed.y()), 1e-6));
  }
  CHECK(chebyshev_center(r.halfspaces()).radius >= 0.5);
}

TEST_CASE("build_region_set: empty map gives one region with full coverage") {
  const World w = open_world({});
  Rng rng(9);
  const RegionSet set = build_region_set(w, rng, 0.95, 40);
  CHECK(set.regions.size() == 1);
  CHECK(set.coverage == doctest::Approx(1.0));
  CHECK(set.coverage_reached);
}

TEST_CASE("build_region_set reaches coverage with targeted seeds first") {
  const World w = open_world({box(0, 0, 3.3, 3.5, 3.7), box(1, 5.0, 3.3, 10, 3.7),
                              box(2, 4, 7, 6, 8)});
  Rng rng(13);
  const RegionSet set = build_region_set(w, rng, 0.95, 40);
  CHECK(set.coverage >= 0.95);
  CHECK(set.coverage_reached);
  // Provenance lists all targeted regions before any random region.
  bool seen_random = false;
  for (const auto p : set.provenance) {
    if (p == RegionProvenance::kRandomSeed) seen_random = true;
    if (seen_random) CHECK(p == RegionProvenance::kRandomSeed);
  }
  // Region-obstacle disjointness.
  for (const auto& r : set.regions)
    for (const auto& o : w.statics) {
      const auto cp = closest_point_pair(r.vertices(), o.shape);
      CHECK(cp.dist >= -1e-7);
    }
}

TEST_CASE("coverage estimate is monotone in the region count") {
  const World w = open_world({box(0, 4, 4, 6, 6)});
  Rng rng(17);
  const RegionSet set = build_region_set(w, rng, 0.97, 40);
  // Rebuild prefix coverage with a fresh fixed sample set.
  Rng srng(99);
  std::vector<Point2> samples;
  while (samples.size() < 5000) {
    const Point2 p(srng.uniform(0, 10), srng.uniform(0, 10));
    if (w.in_free_space(p, 0.0)) samples.push_back(p);
  }
  double prev = 0.0;
  for (size_t m = 1; m <= set.regions.size(); ++m) {
    size_t hit = 0;
    for (const auto& p : samples)
      for (size_t r = 0; r < m; ++r)
        if (set.regions[r].contains(p, 0.0)) {
          ++hit;
          break;
        }
    const double cov = static_cast<double>(hit) / samples.size();
    CHECK(cov >= prev - 1e-12);
    prev = cov;
  }
}

TEST_CASE("build_region_set is deterministic for a fixed seed") {
  const World w = open_world({box(0, 4, 4, 6, 6), box(1, 1, 7, 3, 9)});
  Rng r1(21), r2(21);
  const RegionSet a = build_region_set(w, r1, 0.95, 40);
  const RegionSet b = build_region_set(w, r2, 0.95, 40);
  REQUIRE(a.regions.size() == b.regions.size());
  CHECK(a.coverage == b.coverage);
  for (size_t i = 0; i < a.regions.size(); ++i) {
    REQUIRE(a.regions[i].vertices().size() == b.regions[i].vertices().size());
    for (size_t v = 0; v < a.regions[i].vertices().size(); ++v)
      CHECK((a.regions[i].vertices()[v] - b.regions[i].vertices()[v]).norm() ==
            0.0);
  }
}

TEST_CASE("max_regions cap flags unreached coverage") {
  const World w = open_world({box(0, 4, 4, 6, 6), box(1, 1, 7, 3, 9)});
  Rng rng(23);
  const RegionSet set = build_region_set(w, rng, 0.999, 2);
  CHECK(set.regions.size() == 2);
  CHECK_FALSE(set.coverage_reached);
}
