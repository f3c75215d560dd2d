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

#ifndef MMRPLAN_GEOM2D_HPP
#define MMRPLAN_GEOM2D_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mmrplan {

using Point2 = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Rotate a vector 90 degrees counter-clockwise.
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

struct DegenerateShape : std::runtime_error {
  explicit DegenerateShape(const std::string& what) : std::runtime_error(what) {}
};
struct UnboundedRegion : std::runtime_error {
  explicit UnboundedRegion(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyRegion : std::runtime_error {
  explicit EmptyRegion(const std::string& what) : std::runtime_error(what) {}
};

/// Closed halfspace {x : normal.dot(x) <= offset}, with |normal| = 1.
struct Halfspace {
  Vec2 normal;
  double offset = 0.0;
};

struct Circle {
  Point2 center = Point2::Zero();
  double radius = 0.0;
};

// Convex-hull / polygon helpers on raw vertex lists (CCW output).
std::vector<Point2> convex_hull(std::vector<Point2> pts);
double polygon_area(const std::vector<Point2>& ccw);
Point2 polygon_centroid(const std::vector<Point2>& ccw);
bool convex_contains(const std::vector<Point2>& ccw, const Point2& p,
                     double tol = 0.0);
Point2 closest_point_on_segment(const Point2& p, const Point2& a,
                                const Point2& b);
/// Closest point of a convex polygon boundary-or-interior to p.
Point2 closest_point_on_convex(const std::vector<Point2>& ccw, const Point2& p);
double segment_polygon_distance(const Point2& a, const Point2& b,
                                const std::vector<Point2>& ccw);

/// Bounded nonempty convex polygon kept in dual form: supporting halfspaces
/// and CCW vertices always describe the same set.
class ConvexRegion {
 public:
  ConvexRegion() = default;  // empty placeholder; fill via the factories

  static ConvexRegion from_vertices(const std::vector<Point2>& pts);
  /// Enumerates vertices by pairwise halfspace intersection, keeps the
  /// feasible ones and canonicalizes both representations from the hull.
  /// Throws UnboundedRegion / EmptyRegion when the set is not a polygon.
  static ConvexRegion from_halfspaces(const std::vector<Halfspace>& hs);

  const std::vector<Halfspace>& halfspaces() const { return faces_; }
  const std::vector<Point2>& vertices() const { return verts_; }

  bool contains(const Point2& p, double slack = 0.0) const;
  /// min over faces of (offset - normal.dot(p)); positive inside.
  double containment_margin(const Point2& p) const;
  double area() const { return polygon_area(verts_); }
  Point2 centroid() const { return polygon_centroid(verts_); }
  Eigen::AlignedBox2d bounding_box() const;

 private:
  std::vector<Halfspace> faces_;
  std::vector<Point2> verts_;
};

struct ClosestPair {
  Point2 on_a;
  Point2 on_b;
  double dist = 0.0;
};

/// Closest points between two convex polygons (vertex lists, any winding).
/// dist == 0 iff the closed polygons intersect. Symmetric in its arguments:
/// swapping them swaps on_a/on_b. Throws DegenerateShape for <3 vertices or
/// zero area.
ClosestPair closest_point_pair(const std::vector<Point2>& a,
                               const std::vector<Point2>& b);

struct ChebyshevResult {
  Point2 center = Point2::Zero();
  double radius = 0.0;  // <= 0 signals empty interior
};

/// Largest inscribed circle of the halfspace intersection, by enumerating
/// triples of active constraints of the lifted LP. Throws UnboundedRegion
/// when the normals do not positively span the plane.
ChebyshevResult chebyshev_center(const std::vector<Halfspace>& hs);

/// Empty (nullopt) iff the Chebyshev radius of the pooled halfspaces is
/// <= 1e-7 m; otherwise the canonical region for the intersection.
std::optional<ConvexRegion> intersect_regions(const ConvexRegion& a,
                                              const ConvexRegion& b);

/// 2D convex cone with apex p spanned by two unit edge directions; the
/// second edge lies counter-clockwise of the first by the interior angle
/// (in (0, pi]; exactly pi degenerates to a halfplane).
class Cone2 {
 public:
  Cone2(const Point2& apex, const Vec2& edge_first, const Vec2& edge_second);

  const Point2& apex() const { return apex_; }
  const Vec2& edge_first() const { return e1_; }
  const Vec2& edge_second() const { return e2_; }
  const Eigen::Matrix2d& matrix() const { return mat_; }

  /// True iff both rows of E (x - apex) <= slack.
  bool contains(const Point2& x, double slack = 0.0) const;
  /// max of the two rows of E (x - apex); <= 0 inside.
  double violation(const Point2& x) const;

 private:
  Point2 apex_;
  Vec2 e1_, e2_;
  Eigen::Matrix2d mat_;
};

}  // namespace mmrplan

#endif  // MMRPLAN_GEOM2D_HPP
