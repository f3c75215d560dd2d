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

#include "mmrplan/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <limits>
#include <queue>

#include "mmrplan/nlp_solver.hpp"

namespace mmrplan {

using Eigen::VectorXd;

ContainmentCheck contain_circles(const ConvexRegion& region,
                                 const std::vector<Circle>& circles,
                                 double d_safe) {
  ContainmentCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  for (const auto& c : circles) {
    for (const auto& f : region.halfspaces()) {
      out.margin = std::min(
          out.margin, f.offset - f.normal.dot(c.center) - c.radius - d_safe);
    }
  }
  out.ok = out.margin >= 0.0;
  return out;
}

namespace {

struct FormationVars {
  // Layout: [p(2), psi, per robot: (px, py, phi)].
  static int dim(size_t n) { return 3 + 3 * static_cast<int>(n); }

  static FormationConfig unpack(const VectorXd& z, const FormationSpec& spec) {
    FormationConfig c;
    c.p = Point2(z[0], z[1]);
    c.psi = z[2];
    const size_t n = spec.robot_count();
    const Eigen::Rotation2Dd rot(c.psi);
    for (size_t i = 0; i < n; ++i) {
      MmrState s;
      s.p = Point2(z[3 + 3 * i], z[4 + 3 * i]);
      s.phi = z[5 + 3 * i];
      const Point2 grasp = c.p + rot * spec.grasp.grasp_offsets[i];
      const Vec2 d = grasp - s.p;
      const double q2 = std::max(d.norm(), 1e-9);
      const double q1 = wrap_angle(std::atan2(d.y(), d.x()) - s.phi);
      s.q = {q1, q2, wrap_angle(c.psi - s.phi - q1)};
      c.robots.push_back(s);
    }
    return c;
  }
};

}  // namespace

std::optional<FormationNode> formation_pose_opt(
    const ConvexRegion& intersection,
    const std::vector<const ConvexRegion*>& hosts,
    const std::array<int, 2>& host_ids, const Point2& p_start,
    const Point2& p_goal, const FormationSpec& spec, double d_safe,
    std::optional<Point2> pinned_com) {
  const size_t n = spec.robot_count();
  const ConeLimits cones = formation_cone_limits(spec.grasp, spec.base, spec.arm);
  const double r_base = spec.base.circumradius();
  const double r_obj = spec.grasp.object_circumradius();
  const double q2_mid =
      0.5 * (spec.arm.q_lower[1] + spec.arm.q_upper[1]);

  const Point2 com0 = pinned_com ? *pinned_com
                                 : chebyshev_center(intersection.halfspaces())
                                       .center;
  const Vec2 heading = p_goal - p_start;
  const double psi0 =
      heading.norm() > 1e-9 ? std::atan2(heading.y(), heading.x()) : 0.0;

  // Circle-to-host assignment, refined once from the previous solution.
  auto assign = [&](const FormationConfig& c) {
    std::vector<int> a(n + 1, 0);
    if (hosts.size() < 2) return a;
    const BodyCircles circles =
        bounding_circles(c, spec.grasp, spec.base, spec.arm);
    for (size_t i = 0; i <= n; ++i) {
      const Circle& circ = i < n ? circles.base[i] : circles.object;
      double best = -std::numeric_limits<double>::infinity();
      for (size_t h = 0; h < hosts.size(); ++h) {
        const double m =
            contain_circles(*hosts[h], {circ}, d_safe).margin;
        if (m > best) {
          best = m;
          a[i] = static_cast<int>(h);
        }
      }
    }
    return a;
  };

  auto solve_with = [&](const std::vector<int>& assignment,
                        const VectorXd& z0) {
    NlpProblem prob;
    prob.dim = FormationVars::dim(n);
    auto grasp_points = [&](const VectorXd& z) {
      std::vector<Point2> g(n);
      const Eigen::Rotation2Dd rot(z[2]);
      for (size_t i = 0; i < n; ++i)
        g[i] = Point2(z[0], z[1]) + rot * spec.grasp.grasp_offsets[i];
      return g;
    };
    prob.objective = [&, p_start, p_goal](const VectorXd& z) {
      const Point2 p(z[0], z[1]);
      double j = (p_goal - p).squaredNorm() + (p_start - p).squaredNorm();
      // Tiny tie-break keeps the redundant robot placement unique.
      const auto g = grasp_points(z);
      for (size_t i = 0; i < n; ++i) {
        const Point2 pi(z[3 + 3 * i], z[4 + 3 * i]);
        const double q2 = (g[i] - pi).norm();
        j += 1e-6 * (q2 - q2_mid) * (q2 - q2_mid);
      }
      return j;
    };
    prob.inequalities = [&, assignment](const VectorXd& z) {
      const FormationConfig c = FormationVars::unpack(z, spec);
      std::vector<double> vals;
      // CoM inside the intersection.
      for (const auto& f : intersection.halfspaces())
        vals.push_back(f.normal.dot(c.p) - f.offset);
      // Joint boxes and cone-modified wrist deviation.
      for (size_t i = 0; i < n; ++i) {
        const auto& q = c.robots[i].q;
        vals.push_back(spec.arm.q_lower[0] - q[0]);
        vals.push_back(q[0] - spec.arm.q_upper[0]);
        vals.push_back(spec.arm.q_lower[1] - q[1]);
        vals.push_back(q[1] - spec.arm.q_upper[1]);
        const double dev = wrap_angle(q[2] - spec.grasp.radial_q3(i));
        vals.push_back(cones.dev_lower[i] - dev);
        vals.push_back(dev - cones.dev_upper[i]);
      }
      // Containment of the base and object circles in assigned hosts.
      const ConvexRegion& obj_host = *hosts[assignment[n]];
      for (const auto& f : obj_host.halfspaces())
        vals.push_back(f.normal.dot(c.p) - (f.offset - r_obj - d_safe));
      for (size_t i = 0; i < n; ++i) {
        const ConvexRegion& host = *hosts[assignment[i]];
        for (const auto& f : host.halfspaces())
          vals.push_back(f.normal.dot(c.robots[i].p) -
                         (f.offset - r_base - d_safe));
      }
      return Eigen::Map<const VectorXd>(vals.data(), vals.size()).eval();
    };

    if (pinned_com) {
      const double inf = std::numeric_limits<double>::infinity();
      prob.lower = VectorXd::Constant(prob.dim, -inf);
      prob.upper = VectorXd::Constant(prob.dim, inf);
      prob.lower[0] = prob.upper[0] = pinned_com->x();
      prob.lower[1] = prob.upper[1] = pinned_com->y();
    }

    NlpOptions opts;
    opts.tol_stationary = 1e-5;
    opts.tol_feasible = 1e-4;
    opts.max_inner = 300;
    return nlp_solve(prob, z0, opts);
  };

  auto pack = [&](const FormationConfig& c) {
    VectorXd z(FormationVars::dim(n));
    z[0] = c.p.x();
    z[1] = c.p.y();
    z[2] = c.psi;
    for (size_t i = 0; i < n; ++i) {
      z[3 + 3 * i] = c.robots[i].p.x();
      z[4 + 3 * i] = c.robots[i].p.y();
      z[5 + 3 * i] = c.robots[i].phi;
    }
    return z;
  };

  FormationConfig guess =
      assemble_radial_formation(com0, psi0, spec.grasp, q2_mid);
  std::vector<int> assignment = assign(guess);
  VectorXd z0 = pack(guess);

  NlpSolution sol;
  for (int attempt = 0; attempt < 2; ++attempt) {
    sol = solve_with(assignment, z0);
    const FormationConfig c = FormationVars::unpack(sol.x, spec);
    const std::vector<int> refreshed = assign(c);
    if (refreshed == assignment) break;
    assignment = refreshed;
    z0 = sol.x;
  }

  const FormationConfig c = FormationVars::unpack(sol.x, spec);
  if (sol.violation > 1e-4) return std::nullopt;
  // Disjunctive audit: every circle must fit at least one host.
  const BodyCircles circles =
      bounding_circles(c, spec.grasp, spec.base, spec.arm);
  std::vector<Circle> checked = circles.base;
  checked.push_back(circles.object);
  for (const auto& circ : checked) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto* h : hosts)
      best = std::max(best, contain_circles(*h, {circ}, d_safe).margin);
    if (best < -1e-4) return std::nullopt;
  }
  FormationNode node;
  node.config = c;
  node.hosts = host_ids;
  node.cost = (p_goal - c.p).squaredNorm() + (p_start - c.p).squaredNorm();
  return node;
}

FormationGraph build_graph(const RegionSet& regions, const FormationSpec& spec,
                           const Point2& p_start, const Point2& p_goal,
                           double d_safe) {
  FormationGraph graph;
  const size_t m = regions.regions.size();

  // Start and goal formations, pinned at their CoM, hosted by the deepest
  // feasible region.
  auto endpoint_node = [&](const Point2& p) -> std::optional<FormationNode> {
    std::vector<size_t> order;
    for (size_t r = 0; r < m; ++r)
      if (regions.regions[r].contains(p, 1e-9)) order.push_back(r);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return regions.regions[a].containment_margin(p) >
             regions.regions[b].containment_margin(p);
    });
    for (size_t r : order) {
      auto node = formation_pose_opt(
          regions.regions[r], {&regions.regions[r]},
          {static_cast<int>(r), -1}, p_start, p_goal, spec, d_safe, p);
      if (node) return node;
    }
    return std::nullopt;
  };

  auto start_node = endpoint_node(p_start);
  if (!start_node)
    throw NoStartFormation("build_graph: no feasible start formation");
  auto goal_node = endpoint_node(p_goal);
  if (!goal_node) throw NoGoalFormation("build_graph: no feasible goal formation");

  graph.nodes.push_back(*start_node);
  graph.start_id = 0;
  graph.nodes.push_back(*goal_node);
  graph.goal_id = 1;

  // Intersection nodes; each pairwise solve is independent.
  std::vector<std::pair<std::array<int, 2>, std::optional<ConvexRegion>>> pairs;
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a + 1; b < m; ++b)
      pairs.push_back({{static_cast<int>(a), static_cast<int>(b)},
                       intersect_regions(regions.regions[a],
                                         regions.regions[b])});
  std::vector<std::future<std::optional<FormationNode>>> jobs;
  for (const auto& [ids, inter] : pairs) {
    if (!inter) {
      jobs.emplace_back();
      continue;
    }
    jobs.push_back(std::async(
        std::launch::async,
        [&, ids, inter]() {
          return formation_pose_opt(
              *inter,
              {&regions.regions[ids[0]], &regions.regions[ids[1]]}, ids,
              p_start, p_goal, spec, d_safe);
        }));
  }
  int skipped = 0;
  for (auto& job : jobs) {
    if (!job.valid()) continue;
    auto node = job.get();
    if (node)
      graph.nodes.push_back(*node);
    else
      ++skipped;
  }
  if (skipped > 0)
    std::cerr << "build_graph: skipped " << skipped
              << " infeasible region intersections\n";

  // Edges: both CoMs inside one shared region. Pick the hosting region with
  // the best worst-end margin.
  const size_t nn = graph.nodes.size();
  for (size_t a = 0; a < nn; ++a) {
    for (size_t b = a + 1; b < nn; ++b) {
      int best_region = -1;
      double best_margin = -std::numeric_limits<double>::infinity();
      for (size_t r = 0; r < m; ++r) {
        const auto& reg = regions.regions[r];
        const double ma = reg.containment_margin(graph.nodes[a].config.p);
        const double mb = reg.containment_margin(graph.nodes[b].config.p);
        const double worst = std::min(ma, mb);
        if (worst >= -1e-9 && worst > best_margin) {
          best_margin = worst;
          best_region = static_cast<int>(r);
        }
      }
      if (best_region >= 0) {
        graph.edges.push_back(FormationGraph::Edge{
            static_cast<int>(a), static_cast<int>(b),
            (graph.nodes[a].config.p - graph.nodes[b].config.p).norm(),
            best_region});
      }
    }
  }
  return graph;
}

std::vector<int> shortest_path(const FormationGraph& graph) {
  const size_t n = graph.nodes.size();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : graph.edges) {
    adj[e.a].push_back({e.b, e.weight});
    adj[e.b].push_back({e.a, e.weight});
  }
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> prev(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[graph.start_id] = 0.0;
  pq.push({0.0, graph.start_id});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj[u]) {
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        prev[v] = u;
        pq.push({dist[v], v});
      }
    }
  }
  if (!std::isfinite(dist[graph.goal_id]))
    throw NoPath("shortest_path: goal unreachable");
  std::vector<int> path;
  for (int v = graph.goal_id; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Bezier reference

Point2 BezierSegment::eval(double u) const {
  const double v = 1.0 - u;
  return v * v * v * ctrl[0] + 3.0 * v * v * u * ctrl[1] +
         3.0 * v * u * u * ctrl[2] + u * u * u * ctrl[3];
}

Vec2 BezierSegment::derivative(double u) const {
  const double v = 1.0 - u;
  return 3.0 * v * v * (ctrl[1] - ctrl[0]) +
         6.0 * v * u * (ctrl[2] - ctrl[1]) +
         3.0 * u * u * (ctrl[3] - ctrl[2]);
}

namespace {
constexpr int kArcSamples = 512;
}

ReferenceTrajectory::ReferenceTrajectory(std::vector<BezierSegment> segments,
                                         double v_op)
    : segments_(std::move(segments)), v_op_(v_op) {
  double total = 0.0;
  for (const auto& seg : segments_) {
    std::vector<double> cum(kArcSamples + 1, 0.0);
    Point2 prev = seg.eval(0.0);
    for (int j = 1; j <= kArcSamples; ++j) {
      const Point2 p = seg.eval(static_cast<double>(j) / kArcSamples);
      cum[j] = cum[j - 1] + (p - prev).norm();
      prev = p;
    }
    seg_start_.push_back(total);
    total += cum.back();
    cum_.push_back(std::move(cum));
  }
  total_length_ = total;
  total_time_ = total / v_op_;
}

Point2 ReferenceTrajectory::position(double t) const {
  if (segments_.empty()) return Point2::Zero();
  if (t <= 0.0) return segments_.front().eval(0.0);
  if (t >= total_time_) return segments_.back().eval(1.0);
  const double s = v_op_ * t;
  // Locate the segment.
  size_t k = segments_.size() - 1;
  for (size_t i = 0; i + 1 < segments_.size(); ++i) {
    if (s < seg_start_[i + 1]) {
      k = i;
      break;
    }
  }
  const double local = s - seg_start_[k];
  const auto& cum = cum_[k];
  const auto it = std::lower_bound(cum.begin(), cum.end(), local);
  if (it == cum.begin()) return segments_[k].eval(0.0);
  const size_t hi = static_cast<size_t>(it - cum.begin());
  const double s0 = cum[hi - 1], s1 = cum[hi];
  const double frac = s1 > s0 ? (local - s0) / (s1 - s0) : 0.0;
  const double u =
      (static_cast<double>(hi - 1) + frac) / static_cast<double>(kArcSamples);
  return segments_[k].eval(u);
}

ReferenceTrajectory smooth_path(
    const std::vector<Point2>& waypoints,
    const std::vector<std::vector<const ConvexRegion*>>& hosts, double v_op) {
  const size_t m = waypoints.size();
  if (m < 2) throw DegenerateShape("smooth_path: need at least 2 waypoints");
  std::vector<Vec2> tangents(m);
  tangents[0] = waypoints[1] - waypoints[0];
  tangents[m - 1] = waypoints[m - 1] - waypoints[m - 2];
  for (size_t j = 1; j + 1 < m; ++j)
    tangents[j] = 0.5 * (waypoints[j + 1] - waypoints[j - 1]);

  auto build = [&](const std::vector<Vec2>& tan) {
    std::vector<BezierSegment> segs;
    for (size_t j = 0; j + 1 < m; ++j) {
      BezierSegment s;
      s.ctrl = {waypoints[j], waypoints[j] + tan[j] / 3.0,
                waypoints[j + 1] - tan[j + 1] / 3.0, waypoints[j + 1]};
      segs.push_back(s);
    }
    return segs;
  };
  auto segment_ok = [&](const BezierSegment& seg, size_t j) {
    if (j >= hosts.size() || hosts[j].empty()) return true;
    for (int q = 0; q <= 400; ++q) {
      const Point2 p = seg.eval(q / 400.0);
      bool inside = false;
      for (const auto* h : hosts[j])
        if (h->contains(p, 1e-9)) {
          inside = true;
          break;
        }
      if (!inside) return false;
    }
    return true;
  };

  std::vector<BezierSegment> segs = build(tangents);
  for (int round = 0; round < 5; ++round) {
    bool any_bad = false;
    std::vector<bool> shrink(m, false);
    for (size_t j = 0; j + 1 < m; ++j) {
      if (!segment_ok(segs[j], j)) {
        any_bad = true;
        shrink[j] = shrink[j + 1] = true;
      }
    }
    if (!any_bad) break;
    for (size_t j = 0; j < m; ++j)
      if (shrink[j]) tangents[j] *= 0.5;
    segs = build(tangents);
  }
  for (size_t j = 0; j + 1 < m; ++j) {
    if (!segment_ok(segs[j], j)) {
      // Fall back to the chord; convexity of the host region covers it.
      const Vec2 chord = waypoints[j + 1] - waypoints[j];
      segs[j].ctrl = {waypoints[j], waypoints[j] + chord / 3.0,
                      waypoints[j + 1] - chord / 3.0, waypoints[j + 1]};
    }
  }
  return ReferenceTrajectory(std::move(segs), v_op);
}

GlobalPlan plan_global(const World& world, Rng& rng) {
  GlobalPlan plan;
  plan.v_op = world.params.v_op;
  plan.params_json = world.params.to_json();
  plan.seeds = seed_points(gap_obstacles(world), rng);
  plan.regions = build_region_set(world, rng, world.params.coverage_target,
                                  world.params.max_regions);
  plan.graph = build_graph(plan.regions, world.formation, world.start,
                           world.goal, world.params.d_safe);
  plan.path = shortest_path(plan.graph);

  std::vector<Point2> waypoints;
  std::vector<std::vector<const ConvexRegion*>> hosts;
  std::vector<int> corridor;
  for (size_t k = 0; k < plan.path.size(); ++k)
    waypoints.push_back(plan.graph.nodes[plan.path[k]].config.p);
  for (size_t k = 0; k + 1 < plan.path.size(); ++k) {
    const int a = plan.path[k], b = plan.path[k + 1];
    int region = -1;
    for (const auto& e : plan.graph.edges) {
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) {
        region = e.region;
        break;
      }
    }
    std::vector<const ConvexRegion*> h;
    for (size_t r = 0; r < plan.regions.regions.size(); ++r) {
      const auto& reg = plan.regions.regions[r];
      if (reg.contains(waypoints[k], 1e-9) &&
          reg.contains(waypoints[k + 1], 1e-9))
        h.push_back(&reg);
    }
    hosts.push_back(h);
    if (corridor.empty() || corridor.back() != region) corridor.push_back(region);
  }
  plan.corridor = corridor;
  plan.ref = smooth_path(waypoints, hosts, world.params.v_op);
  plan.bezier = plan.ref.segments();
  plan.start_formation = plan.graph.nodes[plan.path.front()].config;
  return plan;
}

}  // namespace mmrplan
