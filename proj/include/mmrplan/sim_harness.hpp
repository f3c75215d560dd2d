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

#ifndef MMRPLAN_SIM_HARNESS_HPP
#define MMRPLAN_SIM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mmrplan/global_planner.hpp"
#include "mmrplan/nmpc_planner.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

enum class SimStatus { kGoalReached, kPlanFailed, kTimeout };

std::string to_string(SimStatus s);

struct SimStep {
  double t = 0.0;
  FormationConfig config;
  std::vector<std::array<double, 6>> controls;  // empty on the initial row
  double static_margin = 0.0;
  std::vector<double> dyn_margins;  // one per dynamic obstacle
  double tracking_error = 0.0;
  std::vector<double> grasp_errors;  // one per robot
};

struct HorizonDiagnostics {
  double t0 = 0.0;
  int inner_iterations = 0;
  double violation = 0.0;
  double objective = 0.0;
  double wall_seconds = 0.0;
};

struct SimLog {
  std::vector<SimStep> steps;
  SimStatus status = SimStatus::kTimeout;
  std::vector<HorizonDiagnostics> horizons;
  uint64_t scenario_hash = 0;
  uint64_t seed = 0;
  std::string params_json;
  size_t robot_count = 0;
  size_t dyn_count = 0;
};

/// Distance margins of the formation bodies at one configuration: circles
/// for bases and object, segments for the arms against the statics; circle
/// set (incl. arm circles) against each dynamic obstacle's true position.
double static_margin_of(const FormationConfig& config, const World& world);
std::vector<double> dynamic_margins_of(const FormationConfig& config,
                                       const World& world, double t);

/// Closed-loop run: solve a horizon, execute the first T_e of controls via
/// the exact integrator, advance the true obstacle scripts, log every T_c.
SimLog run_simulation(const World& world, const GlobalPlan& plan,
                      uint64_t rng_seed);

struct AuditReport {
  SimStatus status = SimStatus::kTimeout;
  uint64_t scenario_hash = 0;
  uint64_t seed = 0;
  double min_static_margin = 0.0;
  std::vector<double> min_dyn_margins;
  double max_grasp_error = 0.0;
  double max_heading_error = 0.0;
  double max_tracking_error = 0.0;
  double path_length = 0.0;
  double completion_time = 0.0;
  double wall_per_horizon_mean = 0.0;
  double wall_per_horizon_max = 0.0;
  double max_log_discrepancy = 0.0;  // recomputed vs logged margins
  std::vector<std::string> flags;

  std::string to_json() const;
};

/// Recomputes every margin from the logged states with direct geometry
/// calls and cross-checks them against the logged columns.
AuditReport audit_log(const SimLog& log, const World& world,
                      const GlobalPlan& plan);

std::string simlog_to_csv(const SimLog& log);
SimLog simlog_from_csv(const std::string& text);

}  // namespace mmrplan

#endif  // MMRPLAN_SIM_HARNESS_HPP
