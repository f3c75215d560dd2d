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

#ifndef MMRPLAN_GLOBAL_PLANNER_HPP
#define MMRPLAN_GLOBAL_PLANNER_HPP

#include <array>
#include <optional>
#include <vector>

#include "mmrplan/free_regions.hpp"
#include "mmrplan/geom2d.hpp"
#include "mmrplan/mmr_model.hpp"
#include "mmrplan/narrow_seeding.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

struct NoStartFormation : std::runtime_error {
  explicit NoStartFormation(const std::string& what)
      : std::runtime_error(what) {}
};
struct NoGoalFormation : std::runtime_error {
  explicit NoGoalFormation(const std::string& what)
      : std::runtime_error(what) {}
};
struct NoPath : std::runtime_error {
  explicit NoPath(const std::string& what) : std::runtime_error(what) {}
};

struct ContainmentCheck {
  bool ok = false;
  double margin = 0.0;  // min over faces and circles of b - a.c - r - d_safe
};

/// Closed-form circle containment against one region with safety buffer.
ContainmentCheck contain_circles(const ConvexRegion& region,
                                 const std::vector<Circle>& circles,
                                 double d_safe);

struct FormationNode {
  FormationConfig config;
  std::array<int, 2> hosts{-1, -1};  // region ids; second -1 for start/goal
  double cost = 0.0;
};

struct FormationGraph {
  struct Edge {
    int a = 0;
    int b = 0;
    double weight = 0.0;
    int region = -1;  // hosting region for the segment
  };
  std::vector<FormationNode> nodes;
  std::vector<Edge> edges;
  int start_id = -1;
  int goal_id = -1;
};

/// Fixed-formation pose optimization over (p, psi, base poses); arm joints
/// are eliminated through inverse kinematics so the grasp equalities hold by
/// construction. Returns nullopt when no pose satisfies the containment and
/// joint constraints within 1e-4.
std::optional<FormationNode> formation_pose_opt(
    const ConvexRegion& intersection, const std::vector<const ConvexRegion*>& hosts,
    const std::array<int, 2>& host_ids, const Point2& p_start,
    const Point2& p_goal, const FormationSpec& spec, double d_safe,
    std::optional<Point2> pinned_com = std::nullopt);

/// Nodes at every feasible pairwise region intersection plus start and goal;
/// edges between nodes whose object CoMs share a region.
FormationGraph build_graph(const RegionSet& regions, const FormationSpec& spec,
                           const Point2& p_start, const Point2& p_goal,
                           double d_safe);

/// Dijkstra over the Euclidean weights; throws NoPath.
std::vector<int> shortest_path(const FormationGraph& graph);

struct BezierSegment {
  std::array<Point2, 4> ctrl;
  Point2 eval(double u) const;
  Vec2 derivative(double u) const;
};

/// Piecewise cubic Bezier over the waypoints, arc-length reparameterized to
/// the operational velocity.
class ReferenceTrajectory {
 public:
  ReferenceTrajectory() = default;
  ReferenceTrajectory(std::vector<BezierSegment> segments, double v_op);

  Point2 position(double t) const;
  double total_time() const { return total_time_; }
  double arc_length() const { return total_length_; }
  double v_op() const { return v_op_; }
  const std::vector<BezierSegment>& segments() const { return segments_; }

 private:
  std::vector<BezierSegment> segments_;
  std::vector<std::vector<double>> cum_;  // per segment: cumulative lengths
  std::vector<double> seg_start_;         // arc length at segment start
  double total_length_ = 0.0;
  double total_time_ = 0.0;
  double v_op_ = 1.0;
};

/// Catmull-Rom tangents, containment-checked against each edge's host
/// regions with tangent halving (5 rounds) and a linear fallback.
ReferenceTrajectory smooth_path(const std::vector<Point2>& waypoints,
                                const std::vector<std::vector<const ConvexRegion*>>& hosts,
                                double v_op);

struct GlobalPlan {
  RegionSet regions;
  SeedList seeds;
  FormationGraph graph;
  std::vector<int> path;      // node ids, start..goal
  std::vector<int> corridor;  // region id per path edge, deduped
  std::vector<BezierSegment> bezier;
  ReferenceTrajectory ref;
  FormationConfig start_formation;
  double v_op = 0.15;
  std::string params_json;  // parameter fingerprint for artifact provenance
  uint64_t scenario_hash = 0;
  uint64_t seed = 0;
};

/// Full offline pipeline: narrow seeding, region growth, graph, path,
/// smoothing. Throws NoStartFormation / NoGoalFormation / NoPath.
GlobalPlan plan_global(const World& world, Rng& rng);

}  // namespace mmrplan

#endif  // MMRPLAN_GLOBAL_PLANNER_HPP
