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

#include "mmrplan/geom2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmrplan {

namespace {
constexpr double kFeasTol = 1e-9;
constexpr double kDetTol = 1e-12;
constexpr double kEmptyRadius = 1e-7;
}  // namespace

double wrap_angle(double a) {
  double y = std::fmod(a + M_PI, 2.0 * M_PI);
  if (y <= 0.0) y += 2.0 * M_PI;
  return y - M_PI;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) {
                          return (a - b).norm() < 1e-12;
                        }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) return pts;
  std::vector<Point2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {  // lower
    while (k >= 2 &&
           cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-12)
      --k;
    hull[k++] = pts[i];
  }
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {  // upper
    while (k >= lower &&
           cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-12)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Point2>& ccw) {
  double s = 0.0;
  const size_t n = ccw.size();
  for (size_t i = 0; i < n; ++i) s += cross2(ccw[i], ccw[(i + 1) % n]);
  return 0.5 * s;
}

Point2 polygon_centroid(const std::vector<Point2>& ccw) {
  const size_t n = ccw.size();
  const double area = polygon_area(ccw);
  if (std::abs(area) < 1e-14) {
    Point2 m = Point2::Zero();
    for (const auto& p : ccw) m += p;
    return m / static_cast<double>(n);
  }
  Point2 c = Point2::Zero();
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = ccw[i];
    const Point2& b = ccw[(i + 1) % n];
    c += (a + b) * cross2(a, b);
  }
  return c / (6.0 * area);
}

bool convex_contains(const std::vector<Point2>& ccw, const Point2& p,
                     double tol) {
  const size_t n = ccw.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = ccw[i];
    const Point2& b = ccw[(i + 1) % n];
    if (cross2(b - a, p - a) < -tol * (b - a).norm()) return false;
  }
  return true;
}

Point2 closest_point_on_segment(const Point2& p, const Point2& a,
                                const Point2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 < 1e-24) return a;
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return a + t * d;
}

Point2 closest_point_on_convex(const std::vector<Point2>& ccw,
                               const Point2& p) {
  if (convex_contains(ccw, p, 0.0)) return p;
  double best = std::numeric_limits<double>::infinity();
  Point2 arg = ccw.front();
  const size_t n = ccw.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 q = closest_point_on_segment(p, ccw[i], ccw[(i + 1) % n]);
    const double d = (q - p).squaredNorm();
    if (d < best) {
      best = d;
      arg = q;
    }
  }
  return arg;
}

double segment_polygon_distance(const Point2& a, const Point2& b,
                                const std::vector<Point2>& ccw) {
  if (convex_contains(ccw, a, 0.0) || convex_contains(ccw, b, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const size_t n = ccw.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2& c = ccw[i];
    const Point2& d = ccw[(i + 1) % n];
    // segment-segment: check crossing, else endpoint projections
    const double d1 = cross2(d - c, a - c), d2 = cross2(d - c, b - c);
    const double d3 = cross2(b - a, c - a), d4 = cross2(b - a, d - a);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    best = std::min(best, (closest_point_on_segment(a, c, d) - a).norm());
    best = std::min(best, (closest_point_on_segment(b, c, d) - b).norm());
    best = std::min(best, (closest_point_on_segment(c, a, b) - c).norm());
    best = std::min(best, (closest_point_on_segment(d, a, b) - d).norm());
  }
  return best;
}

// ---------------------------------------------------------------------------
// ConvexRegion

namespace {

std::vector<Halfspace> faces_from_ccw(const std::vector<Point2>& ccw) {
  std::vector<Halfspace> faces;
  const size_t n = ccw.size();
  faces.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const Point2& a = ccw[i];
    const Point2& b = ccw[(i + 1) % n];
    Vec2 d = b - a;
    const double len = d.norm();
    if (len < 1e-12) continue;
    const Vec2 normal(d.y() / len, -d.x() / len);  // outward for CCW
    faces.push_back(Halfspace{normal, normal.dot(a)});
  }
  return faces;
}

}  // namespace

ConvexRegion ConvexRegion::from_vertices(const std::vector<Point2>& pts) {
  std::vector<Point2> hull = convex_hull(pts);
  if (hull.size() < 3 || polygon_area(hull) < 1e-12)
    throw DegenerateShape("ConvexRegion: need a non-degenerate polygon");
  ConvexRegion r;
  r.verts_ = std::move(hull);
  r.faces_ = faces_from_ccw(r.verts_);
  return r;
}

ConvexRegion ConvexRegion::from_halfspaces(const std::vector<Halfspace>& hs) {
  const size_t m = hs.size();
  if (m < 3) throw UnboundedRegion("ConvexRegion: fewer than 3 halfspaces");
  std::vector<Point2> cand;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      const double det = cross2(hs[i].normal, hs[j].normal);
      if (std::abs(det) < kDetTol) continue;
      // solve a_i.x = b_i, a_j.x = b_j
      const Point2 x((hs[i].offset * hs[j].normal.y() -
                      hs[j].offset * hs[i].normal.y()) /
                         det,
                     (hs[j].offset * hs[i].normal.x() -
                      hs[i].offset * hs[j].normal.x()) /
                         det);
      bool ok = true;
      for (size_t k = 0; k < m; ++k) {
        if (hs[k].normal.dot(x) > hs[k].offset + kFeasTol) {
          ok = false;
          break;
        }
      }
      if (ok) cand.push_back(x);
    }
  }
  if (cand.empty()) throw EmptyRegion("ConvexRegion: no feasible vertices");
  // A bounded nonempty intersection with >= 3 halfspaces has a hull; if the
  // candidates collapse the set is degenerate (empty interior).
  std::vector<Point2> hull = convex_hull(cand);
  if (hull.size() < 3 || polygon_area(hull) < 1e-14)
    throw EmptyRegion("ConvexRegion: degenerate (empty interior)");
  // Boundedness check: every candidate direction must be closed off.
  ChebyshevResult ch = chebyshev_center(hs);
  if (!(ch.radius > 0.0))
    throw EmptyRegion("ConvexRegion: empty interior");
  ConvexRegion r;
  r.verts_ = std::move(hull);
  r.faces_ = faces_from_ccw(r.verts_);
  return r;
}

bool ConvexRegion::contains(const Point2& p, double slack) const {
  for (const auto& f : faces_)
    if (f.normal.dot(p) > f.offset + slack) return false;
  return true;
}

double ConvexRegion::containment_margin(const Point2& p) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : faces_) m = std::min(m, f.offset - f.normal.dot(p));
  return m;
}

Eigen::AlignedBox2d ConvexRegion::bounding_box() const {
  Eigen::AlignedBox2d box;
  for (const auto& v : verts_) box.extend(v);
  return box;
}

// ---------------------------------------------------------------------------
// Closest pair between convex polygons

namespace {

bool separated_along(const std::vector<Point2>& a,
                     const std::vector<Point2>& b) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 edge = a[(i + 1) % n] - a[i];
    const Vec2 axis(edge.y(), -edge.x());  // outward
    double max_a = -std::numeric_limits<double>::infinity();
    for (const auto& p : a) max_a = std::max(max_a, axis.dot(p));
    double min_b = std::numeric_limits<double>::infinity();
    for (const auto& p : b) min_b = std::min(min_b, axis.dot(p));
    if (min_b > max_a) return true;
  }
  return false;
}

std::vector<Point2> clip_convex(const std::vector<Point2>& subject,
                                const std::vector<Point2>& clip) {
  std::vector<Point2> out = subject;
  const size_t n = clip.size();
  for (size_t i = 0; i < n && !out.empty(); ++i) {
    const Point2& a = clip[i];
    const Point2& b = clip[(i + 1) % n];
    std::vector<Point2> in = std::move(out);
    out.clear();
    const size_t m = in.size();
    for (size_t j = 0; j < m; ++j) {
      const Point2& p = in[j];
      const Point2& q = in[(j + 1) % m];
      const double dp = cross2(b - a, p - a);
      const double dq = cross2(b - a, q - a);
      if (dp >= 0) out.push_back(p);
      if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
        const double t = dp / (dp - dq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

bool lex_less(const Point2& a, const Point2& b) {
  return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
}

struct Candidate {
  Point2 on_a, on_b;
  double dist;
};

// Prefer smaller distance; on ties prefer the smaller unordered point pair,
// which keeps the choice invariant under argument swap.
bool better(const Candidate& x, const Candidate& y) {
  if (x.dist != y.dist) return x.dist < y.dist;
  const Point2& xmin = lex_less(x.on_a, x.on_b) ? x.on_a : x.on_b;
  const Point2& xmax = lex_less(x.on_a, x.on_b) ? x.on_b : x.on_a;
  const Point2& ymin = lex_less(y.on_a, y.on_b) ? y.on_a : y.on_b;
  const Point2& ymax = lex_less(y.on_a, y.on_b) ? y.on_b : y.on_a;
  if (xmin != ymin) return lex_less(xmin, ymin);
  return lex_less(xmax, ymax);
}

Candidate vertex_edge_scan(const std::vector<Point2>& verts,
                           const std::vector<Point2>& poly) {
  Candidate best{Point2::Zero(), Point2::Zero(),
                 std::numeric_limits<double>::infinity()};
  const size_t n = poly.size();
  for (const auto& v : verts) {
    for (size_t i = 0; i < n; ++i) {
      const Point2 q = closest_point_on_segment(v, poly[i], poly[(i + 1) % n]);
      Candidate c{v, q, (q - v).norm()};
      if (better(c, best)) best = c;
    }
  }
  return best;
}

}  // namespace

ClosestPair closest_point_pair(const std::vector<Point2>& a_in,
                               const std::vector<Point2>& b_in) {
  std::vector<Point2> a = convex_hull(a_in);
  std::vector<Point2> b = convex_hull(b_in);
  if (a.size() < 3 || polygon_area(a) < 1e-12)
    throw DegenerateShape("closest_point_pair: first polygon degenerate");
  if (b.size() < 3 || polygon_area(b) < 1e-12)
    throw DegenerateShape("closest_point_pair: second polygon degenerate");

  if (!separated_along(a, b) && !separated_along(b, a)) {
    std::vector<Point2> inter = clip_convex(a, b);
    Point2 pt;
    if (inter.empty()) {
      // touching contact collapsed by clipping noise
      Candidate c1 = vertex_edge_scan(a, b);
      pt = 0.5 * (c1.on_a + c1.on_b);
    } else if (std::abs(polygon_area(inter)) > 1e-12) {
      pt = polygon_centroid(inter);
    } else {
      pt = Point2::Zero();
      for (const auto& p : inter) pt += p;
      pt /= static_cast<double>(inter.size());
    }
    return ClosestPair{pt, pt, 0.0};
  }

  Candidate ab = vertex_edge_scan(a, b);
  Candidate ba = vertex_edge_scan(b, a);
  const Candidate ba_sw{ba.on_b, ba.on_a, ba.dist};
  const Candidate best = better(ab, ba_sw) ? ab : ba_sw;
  return ClosestPair{best.on_a, best.on_b, best.dist};
}

// ---------------------------------------------------------------------------
// Chebyshev center

ChebyshevResult chebyshev_center(const std::vector<Halfspace>& hs_in) {
  std::vector<Halfspace> hs = hs_in;
  for (auto& h : hs) {
    const double n = h.normal.norm();
    if (n < 1e-12) throw DegenerateShape("chebyshev_center: zero normal");
    h.normal /= n;
    h.offset /= n;
  }
  // Bounded iff the normals positively span the plane: the largest angular
  // gap between consecutive normal directions must be < pi.
  std::vector<double> ang;
  ang.reserve(hs.size());
  for (const auto& h : hs) ang.push_back(std::atan2(h.normal.y(), h.normal.x()));
  std::sort(ang.begin(), ang.end());
  double max_gap = ang.front() + 2.0 * M_PI - ang.back();
  for (size_t i = 1; i < ang.size(); ++i)
    max_gap = std::max(max_gap, ang[i] - ang[i - 1]);
  if (max_gap >= M_PI - 1e-9)
    throw UnboundedRegion("chebyshev_center: halfspace set is unbounded");

  // LP max r s.t. a_i.c + r <= b_i; the optimum sits where three constraints
  // are active, so enumerate triples of the 3x3 active systems.
  const size_t m = hs.size();
  ChebyshevResult best;
  best.radius = -std::numeric_limits<double>::infinity();
  Eigen::Matrix3d A;
  Eigen::Vector3d rhs;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      for (size_t k = j + 1; k < m; ++k) {
        A << hs[i].normal.x(), hs[i].normal.y(), 1.0,
             hs[j].normal.x(), hs[j].normal.y(), 1.0,
             hs[k].normal.x(), hs[k].normal.y(), 1.0;
        rhs << hs[i].offset, hs[j].offset, hs[k].offset;
        const double det = A.determinant();
        if (std::abs(det) < kDetTol) continue;
        const Eigen::Vector3d sol = A.partialPivLu().solve(rhs);
        const Point2 c(sol.x(), sol.y());
        const double r = sol.z();
        if (r <= best.radius) continue;
        bool feas = true;
        for (size_t q = 0; q < m; ++q) {
          if (hs[q].normal.dot(c) + r > hs[q].offset + kFeasTol) {
            feas = false;
            break;
          }
        }
        if (feas) {
          best.center = c;
          best.radius = r;
        }
      }
    }
  }
  if (!std::isfinite(best.radius))
    throw UnboundedRegion("chebyshev_center: no LP vertex found");
  return best;
}

std::optional<ConvexRegion> intersect_regions(const ConvexRegion& a,
                                              const ConvexRegion& b) {
  std::vector<Halfspace> pooled = a.halfspaces();
  pooled.insert(pooled.end(), b.halfspaces().begin(), b.halfspaces().end());
  const ChebyshevResult ch = chebyshev_center(pooled);
  if (ch.radius <= kEmptyRadius) return std::nullopt;
  return ConvexRegion::from_halfspaces(pooled);
}

// ---------------------------------------------------------------------------
// Cone2

Cone2::Cone2(const Point2& apex, const Vec2& edge_first,
             const Vec2& edge_second)
    : apex_(apex), e1_(edge_first.normalized()), e2_(edge_second.normalized()) {
  const double interior = std::atan2(cross2(e1_, e2_), e1_.dot(e2_));
  const double angle = (interior <= 1e-12) ? interior + 2.0 * M_PI : interior;
  if (!(angle > 0.0 && angle <= M_PI + 1e-9))
    throw DegenerateShape("Cone2: interior angle must lie in (0, pi]");
  mat_.row(0) = perp(e2_).transpose();
  mat_.row(1) = -perp(e1_).transpose();
}

bool Cone2::contains(const Point2& x, double slack) const {
  const Eigen::Vector2d v = mat_ * (x - apex_);
  return v.x() <= slack && v.y() <= slack;
}

double Cone2::violation(const Point2& x) const {
  const Eigen::Vector2d v = mat_ * (x - apex_);
  return std::max(v.x(), v.y());
}

}  // namespace mmrplan
