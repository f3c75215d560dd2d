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

#ifndef MMRPLAN_NMPC_PLANNER_HPP
#define MMRPLAN_NMPC_PLANNER_HPP

#include <optional>
#include <vector>

#include "mmrplan/global_planner.hpp"
#include "mmrplan/mmr_model.hpp"
#include "mmrplan/nlp_solver.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

struct PlanInfeasible : std::runtime_error {
  explicit PlanInfeasible(const std::string& what)
      : std::runtime_error(what) {}
};

/// Dynamic obstacle as estimated at the start of a horizon.
struct ObstacleSnapshot {
  Point2 position;
  Vec2 velocity;
  double radius = 0.0;
};

struct HorizonPlan {
  std::vector<FormationConfig> states;  // N_h + 1 knots, [0] = X0
  std::vector<std::vector<std::array<double, 6>>> controls;  // N_h x n
  std::vector<int> region_assignment;  // primary corridor index per knot
  /// Corridor index per knot and robot: bodies may hand off between
  /// consecutive corridor regions individually while straddling a gap.
  std::vector<std::vector<int>> robot_regions;
  NlpStatus status = NlpStatus::kMaxIter;
  double objective = 0.0;
  double violation = 0.0;
  int inner_iterations = 0;
};

/// Tracking cost of a candidate plan:
/// sum_{k=1}^{N-1} (u_k' W_u u_k + e_k' W_e e_k) + e_N' W_Nh e_N.
double tracking_cost(const HorizonPlan& plan, const ReferenceTrajectory& ref,
                     double t0, const PlannerParams& params);

/// Assembled one-horizon NLP plus its start vectors and plan extraction;
/// exposed so tests and diagnostics can probe the problem directly.
struct HorizonNlp {
  NlpProblem problem;
  Eigen::VectorXd cold_start;
  std::optional<Eigen::VectorXd> warm_start;
  std::function<HorizonPlan(const Eigen::VectorXd&)> extract;
};

/// Receding-horizon planner over one corridor of obstacle-free regions.
/// The first-order dynamics are condensed exactly (robot states are affine
/// in the controls) and the wrist rate follows from the heading identity,
/// so dynamics defects, the heading identity and the control/state coupling
/// hold to machine precision; the grasp position equalities stay explicit.
class NmpcPlanner {
 public:
  NmpcPlanner(const FormationSpec& spec, const PlannerParams& params,
              std::vector<ConvexRegion> corridor);

  /// Monotone region assignment along the corridor for the given knot CoM
  /// guesses (one per knot, index 0 = current state). When formation guesses
  /// are supplied, a region is preferred only if it also passes the circle
  /// containment check for that knot's guessed formation.
  std::vector<int> assign_regions(
      const std::vector<Point2>& knots,
      const std::vector<FormationConfig>* formation_guess = nullptr) const;

  /// Assembles the horizon NLP without solving it.
  HorizonNlp build_horizon_nlp(const FormationConfig& x0,
                               const ReferenceTrajectory& ref, double t0,
                               const std::vector<ObstacleSnapshot>& obstacles,
                               const HorizonPlan* warm) const;

  /// Solves one horizon. Throws PlanInfeasible when neither the warm- nor
  /// the cold-started solve reaches an acceptable violation.
  HorizonPlan plan_horizon(const FormationConfig& x0,
                           const ReferenceTrajectory& ref, double t0,
                           const std::vector<ObstacleSnapshot>& obstacles,
                           const HorizonPlan* warm) const;

  const std::vector<ConvexRegion>& corridor() const { return corridor_; }
  const PlannerParams& params() const { return params_; }

 private:
  FormationSpec spec_;
  PlannerParams params_;
  std::vector<ConvexRegion> corridor_;
  ConeLimits cone_limits_;
  double r_base_ = 0.0;
  double r_obj_ = 0.0;
  double r_arm_ = 0.0;
  double arm_shift_ = 0.0;
};

}  // namespace mmrplan

#endif  // MMRPLAN_NMPC_PLANNER_HPP
