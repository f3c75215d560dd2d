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

#include <cmath>

#include "mmrplan/geom2d.hpp"
#include "mmrplan/rng.hpp"

using namespace mmrplan;

namespace {

std::vector<Point2> unit_square() {
  return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

std::vector<Point2> square(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

std::vector<Point2> rotate_about(const std::vector<Point2>& pts,
                                 const Point2& c, double ang) {
  std::vector<Point2> out;
  const Eigen::Rotation2Dd rot(ang);
  for (const auto& p : pts) out.push_back(c + rot * (p - c));
  return out;
}

// Dense boundary-pair sampling oracle for polygon-polygon distance.
double sampled_min_distance(const std::vector<Point2>& a,
                            const std::vector<Point2>& b, int per_edge) {
  auto samples = [per_edge](const std::vector<Point2>& poly) {
    std::vector<Point2> out;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      const Point2& p = poly[i];
      const Point2& q = poly[(i + 1) % n];
      for (int k = 0; k < per_edge; ++k)
        out.push_back(p + (q - p) * (static_cast<double>(k) / per_edge));
    }
    return out;
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pa : samples(a))
    for (const auto& pb : samples(b))
      best = std::min(best, (pa - pb).norm());
  return best;
}

}  // namespace

TEST_CASE("wrap_angle maps to (-pi, pi]") {
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
  CHECK(wrap_angle(0.25) == doctest::Approx(0.25));
  CHECK(wrap_angle(7 * M_PI) == doctest::Approx(M_PI));
}

TEST_CASE("region contains with slack") {
  const auto region = ConvexRegion::from_vertices(unit_square());
  CHECK(region.contains({0.5, 0.5}, 0.0));
  CHECK_FALSE(region.contains({1.5, 0.5}, 0.0));
  CHECK(region.contains({1.0005, 0.5}, 0.001));
}

TEST_CASE("region dual representation is consistent") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    // Random convex polygon from a point cloud.
    std::vector<Point2> cloud;
    for (int i = 0; i < 12; ++i)
      cloud.push_back({rng.uniform(-3, 3), rng.uniform(-2, 4)});
    ConvexRegion region = ConvexRegion::from_vertices(cloud);
    for (const auto& v : region.vertices())
      for (const auto& f : region.halfspaces())
        CHECK(f.normal.dot(v) <= f.offset + 1e-7);
    // Reconstruct from vertices and compare membership on random points.
    ConvexRegion rebuilt = ConvexRegion::from_vertices(region.vertices());
    int mismatches = 0;
    for (int i = 0; i < 20000; ++i) {
      const Point2 p(rng.uniform(-4, 4), rng.uniform(-3, 5));
      if (region.contains(p, 1e-9) != rebuilt.contains(p, 1e-9)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("closest pair: axis aligned gap") {
  const auto cp = closest_point_pair(unit_square(), square(2, 0, 3, 1));
  CHECK(cp.dist == doctest::Approx(1.0));
  CHECK(cp.on_a.x() == doctest::Approx(1.0));
  CHECK(cp.on_b.x() == doctest::Approx(2.0));
  CHECK(cp.on_a.y() == doctest::Approx(cp.on_b.y()));
}

TEST_CASE("closest pair: overlap gives zero") {
  const auto cp = closest_point_pair(square(0, 0, 2, 2), square(1, 1, 3, 3));
  CHECK(cp.dist == 0.0);
  CHECK(cp.on_a == cp.on_b);
}

TEST_CASE("closest pair: rotated triangle matches sampling oracle") {
  std::vector<Point2> tri = {{3, 0}, {4, 1}, {3, 2}};
  const Point2 centroid = polygon_centroid(convex_hull(tri));
  tri = rotate_about(tri, centroid, M_PI / 6.0);
  const auto cp = closest_point_pair(unit_square(), tri);
  const double oracle = sampled_min_distance(unit_square(), tri, 2500);
  CHECK(std::abs(cp.dist - oracle) <= 1e-4);
  CHECK(cp.dist <= oracle + 1e-12);  // exact result lower-bounds samples
}

TEST_CASE("closest pair is symmetric") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> a, b;
    for (int i = 0; i < 6; ++i)
      a.push_back({rng.uniform(-2, 0.4), rng.uniform(-1, 1)});
    for (int i = 0; i < 6; ++i)
      b.push_back({rng.uniform(0.6, 3), rng.uniform(-1, 1)});
    ClosestPair ab, ba;
    try {
      ab = closest_point_pair(a, b);
      ba = closest_point_pair(b, a);
    } catch (const DegenerateShape&) {
      continue;
    }
    CHECK(std::abs(ab.dist - ba.dist) <= 1e-12);
    CHECK((ab.on_a - ba.on_b).norm() <= 1e-12);
    CHECK((ab.on_b - ba.on_a).norm() <= 1e-12);
  }
}

TEST_CASE("closest pair rejects degenerate input") {
  CHECK_THROWS_AS(closest_point_pair({{0, 0}, {1, 0}}, unit_square()),
                  DegenerateShape);
  CHECK_THROWS_AS(
      closest_point_pair({{0, 0}, {1, 0}, {2, 0}}, unit_square()),
      DegenerateShape);
}

TEST_CASE("chebyshev center of boxes") {
  const auto sq = ConvexRegion::from_vertices(unit_square());
  const auto r1 = chebyshev_center(sq.halfspaces());
  CHECK(r1.radius == doctest::Approx(0.5));
  CHECK(r1.center.x() == doctest::Approx(0.5));
  CHECK(r1.center.y() == doctest::Approx(0.5));

  const auto rect = ConvexRegion::from_vertices(square(0, 0, 3, 1));
  const auto r2 = chebyshev_center(rect.halfspaces());
  CHECK(r2.radius == doctest::Approx(0.5));
  CHECK(r2.center.y() == doctest::Approx(0.5));
}

TEST_CASE("chebyshev center matches grid search on a random polytope") {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Point2> cloud;
    for (int i = 0; i < 6; ++i)
      cloud.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    ConvexRegion region;
    try {
      region = ConvexRegion::from_vertices(cloud);
    } catch (const DegenerateShape&) {
      continue;
    }
    const auto result = chebyshev_center(region.halfspaces());

    // Grid-search maximization of the inscribed radius: 400x400 sweep,
    // then a refinement sweep around the best cell.
    const auto box = region.bounding_box();
    auto sweep = [&region](const Point2& lo, const Point2& hi) {
      double best = -1.0;
      Point2 arg = lo;
      for (int ix = 0; ix <= 400; ++ix) {
        for (int iy = 0; iy <= 400; ++iy) {
          const Point2 p(lo.x() + (hi.x() - lo.x()) * ix / 400.0,
                         lo.y() + (hi.y() - lo.y()) * iy / 400.0);
          const double m = region.containment_margin(p);
          if (m > best) {
            best = m;
            arg = p;
          }
        }
      }
      return std::pair<double, Point2>(best, arg);
    };
    auto [coarse, at] = sweep(box.min(), box.max());
    const Vec2 cell = (box.max() - box.min()) / 400.0;
    auto [fine, at2] = sweep(at - 2.0 * cell, at + 2.0 * cell);
    CHECK(std::abs(result.radius - std::max(coarse, fine)) <= 1e-3);
  }
}

TEST_CASE("chebyshev center detects unbounded sets") {
  std::vector<Halfspace> slab = {{Vec2(1, 0), 1.0}, {Vec2(-1, 0), 0.0}};
  CHECK_THROWS_AS(chebyshev_center(slab), UnboundedRegion);
}

TEST_CASE("intersect_regions basics") {
  const auto a = ConvexRegion::from_vertices(square(0, 0, 2, 2));
  const auto b = ConvexRegion::from_vertices(square(1, 1, 3, 3));
  const auto inter = intersect_regions(a, b);
  REQUIRE(inter.has_value());
  CHECK(inter->area() == doctest::Approx(1.0));
  CHECK(inter->contains({1.5, 1.5}));
  CHECK_FALSE(inter->contains({0.5, 0.5}));

  const auto c = ConvexRegion::from_vertices(square(5, 5, 6, 6));
  CHECK_FALSE(intersect_regions(a, c).has_value());
}

TEST_CASE("intersect_regions self intersection is identity") {
  const auto a = ConvexRegion::from_vertices(square(0.5, -1, 2.5, 4));
  const auto self = intersect_regions(a, a);
  REQUIRE(self.has_value());
  CHECK(self->area() == doctest::Approx(a.area()).epsilon(1e-9));
  CHECK(self->vertices().size() == a.vertices().size());
}

TEST_CASE("intersect_regions area matches Monte Carlo estimate") {
  Rng rng(21);
  std::vector<Point2> ca, cb;
  for (int i = 0; i < 8; ++i) ca.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
  for (int i = 0; i < 8; ++i) cb.push_back({rng.uniform(-1, 3), rng.uniform(-1, 3)});
  const auto a = ConvexRegion::from_vertices(ca);
  const auto b = ConvexRegion::from_vertices(cb);
  const auto inter = intersect_regions(a, b);
  REQUIRE(inter.has_value());

  const auto box = a.bounding_box();
  const double box_area = (box.max() - box.min()).prod();
  int hits = 0;
  const int samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    const Point2 p(rng.uniform(box.min().x(), box.max().x()),
                   rng.uniform(box.min().y(), box.max().y()));
    if (a.contains(p) && b.contains(p)) ++hits;
  }
  const double mc_area = box_area * hits / samples;
  CHECK(inter->area() ==
        doctest::Approx(mc_area).epsilon(0.01));
}

TEST_CASE("cone containment") {
  // Quarter-plane cone around +x: edges at -45 and +45 degrees.
  const Cone2 cone(Point2(1, 1), Vec2(std::cos(-M_PI / 4), std::sin(-M_PI / 4)),
                   Vec2(std::cos(M_PI / 4), std::sin(M_PI / 4)));
  CHECK(cone.contains(Point2(1, 1)));          // apex
  CHECK(cone.contains(Point2(2, 1)));          // bisector direction
  CHECK(cone.contains(Point2(2, 1.99)));       // inside upper edge
  CHECK_FALSE(cone.contains(Point2(2, 2.01))); // outside upper edge
  CHECK_FALSE(cone.contains(Point2(0, 1)));    // behind apex
}

TEST_CASE("cone containment matches angle-interval oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double a0 = rng.uniform(-M_PI, M_PI);
    const double width = rng.uniform(0.2, M_PI - 0.05);
    const Point2 apex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Cone2 cone(apex, Vec2(std::cos(a0), std::sin(a0)),
                     Vec2(std::cos(a0 + width), std::sin(a0 + width)));
    const double r = rng.uniform(0.01, 3.0);
    const double ang = rng.uniform(-M_PI, M_PI);
    const Point2 p = apex + r * Vec2(std::cos(ang), std::sin(ang));
    const double rel = wrap_angle(ang - a0);
    const bool oracle = rel >= -1e-12 && rel <= width + 1e-12;
    if (std::abs(rel) > 1e-9 && std::abs(rel - width) > 1e-9)
      CHECK(cone.contains(p, 1e-12) == oracle);
    // Reflection across an edge leaves the cone (for points strictly inside).
    if (oracle && rel > 0.05 && width - rel > 0.05 && width < M_PI - 0.1) {
      const Vec2 e1(std::cos(a0), std::sin(a0));
      const Vec2 d = p - apex;
      const Vec2 reflected = 2.0 * d.dot(e1) * e1 - d;
      CHECK_FALSE(cone.contains(apex + reflected, 1e-12));
    }
  }
}

TEST_CASE("cone containment is scale invariant") {
  Rng rng(9);
  const Cone2 cone(Point2(0.3, -0.2), Vec2(1, 0),
                   Vec2(std::cos(2.0), std::sin(2.0)));
  for (int i = 0; i < 500; ++i) {
    const Point2 p(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const bool base = cone.contains(p);
    for (double s : {0.13, 0.77, 4.2, 91.0}) {
      const Point2 scaled = cone.apex() + s * (p - cone.apex());
      CHECK(cone.contains(scaled) == base);
    }
  }
}

TEST_CASE("halfplane cone accepts interior angle pi") {
  const Cone2 half(Point2(0, 0), Vec2(0, -1), Vec2(0, 1));  // x >= 0
  CHECK(half.contains(Point2(1, 5)));
  CHECK(half.contains(Point2(0, -3), 1e-12));
  CHECK_FALSE(half.contains(Point2(-0.01, 0)));
}
