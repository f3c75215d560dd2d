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

#ifndef MMRPLAN_WORLD_HPP
#define MMRPLAN_WORLD_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmrplan/geom2d.hpp"
#include "mmrplan/mmr_model.hpp"

namespace mmrplan {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

struct StaticObstacle {
  int id = 0;
  std::vector<Point2> shape;  // convex, CCW
};

/// Scripted circular-shaped moving obstacle. Linear scripts translate at a
/// constant velocity; curvilinear scripts follow
///   v(t) = amplitude [cos(rate t), -sin(rate t)]
/// integrated from p0.
struct DynamicObstacle {
  enum class Kind { kLinear, kCurvilinear };
  int id = 0;
  double radius = 0.0;
  Kind kind = Kind::kLinear;
  Point2 p0 = Point2::Zero();
  Vec2 v0 = Vec2::Zero();   // linear
  double amplitude = 0.0;   // curvilinear
  double rate = 0.0;        // curvilinear angular rate
};

struct DynamicState {
  Point2 position;
  Vec2 velocity;
};

/// Exact evaluation of the motion script at time t >= 0.
DynamicState dynamic_state(const DynamicObstacle& obs, double t);

/// Constant-velocity extrapolation p + v k T_c for k = 1..N_h.
std::vector<Point2> predict_positions(const Point2& p, const Vec2& v, int n_h,
                                      double t_c);

/// Receding-horizon tuning; defaults follow the nominal simulation setup.
struct PlannerParams {
  int n_h = 24;
  double t_h = 6.0;
  double t_e = 2.0;
  double t_c = 0.25;
  double v_op = 0.15;
  double d_safe = 0.05;
  double d_safe_dyn = 0.1;
  std::array<double, 6> w_u{0.05, 0.05, 0.25, 2.5, 2.5, 2.5};
  std::array<double, 2> w_e{0.01, 0.01};
  double w_nh = 1e3;
  double goal_tolerance = 0.05;
  double sensing_radius = std::numeric_limits<double>::infinity();
  double estimation_noise_std = 0.0;
  double coverage_target = 0.95;
  int max_regions = 40;

  void validate() const;
  /// Compact JSON fingerprint embedded in emitted artifacts.
  std::string to_json() const;
};

struct FormationSpec {
  BaseSpec base;
  ArmSpec arm;
  GraspSpec grasp;

  size_t robot_count() const { return grasp.robot_count(); }
  void validate() const;
};

struct World {
  ConvexRegion bounds;
  std::vector<StaticObstacle> statics;
  std::vector<DynamicObstacle> dynamics;
  Point2 start = Point2::Zero();
  Point2 goal = Point2::Zero();
  FormationSpec formation;
  PlannerParams params;

  bool in_free_space(const Point2& p, double clearance = 0.0) const;
  /// Distance from p to the nearest static obstacle or workspace boundary.
  double static_clearance(const Point2& p) const;
};

/// Parses the JSON scenario document and validates every invariant.
/// Throws ParseError for malformed input, ValidationError for invariant
/// violations (all violations are listed in the message).
World load_scenario(const std::string& text);
World load_scenario_file(const std::string& path);

/// Validation report without planning; empty vector means valid.
std::vector<std::string> validate_scenario(const World& w);

}  // namespace mmrplan

#endif  // MMRPLAN_WORLD_HPP
