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

#include <filesystem>

#include "mmrplan/cli_app.hpp"
#include "mmrplan/plan_io.hpp"
#include "mmrplan/sim_harness.hpp"
#include "mmrplan/svg.hpp"
#include "mmrplan/world.hpp"

using namespace mmrplan;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = MMRPLAN_SCENARIO_DIR;

GlobalPlan plan_for(const World& world, uint64_t seed) {
  Rng rng(seed);
  GlobalPlan plan = plan_global(world, rng);
  plan.seed = seed;
  return plan;
}

}  // namespace

TEST_CASE("open map end to end: straight line plan and clean simulation") {
  const World world =
      load_scenario_file(kScenarioDir + "/open_n2.json");
  const GlobalPlan plan = plan_for(world, 313);

  // Single region covering the whole free space; direct path.
  CHECK(plan.regions.regions.size() == 1);
  CHECK(plan.path.size() == 2);
  CHECK((plan.ref.position(0.0) - world.start).norm() <= 1e-9);
  CHECK((plan.ref.position(plan.ref.total_time()) - world.goal).norm() <=
        1e-9);

  const SimLog log = run_simulation(world, plan, 7);
  CHECK(log.status == SimStatus::kGoalReached);

  // Timestamps advance strictly by T_c.
  for (size_t i = 1; i < log.steps.size(); ++i)
    CHECK(log.steps[i].t - log.steps[i - 1].t ==
          doctest::Approx(world.params.t_c).epsilon(1e-12));

  // Grasp error and heading identity at every logged step.
  for (const auto& s : log.steps) {
    CHECK(grasp_error(s.config, world.formation.grasp) <= 1e-4);
    CHECK(heading_error(s.config) <= 1e-6);
    CHECK(s.static_margin >= world.params.d_safe - 1e-3);
  }

  const AuditReport report = audit_log(log, world, plan);
  CHECK(report.status == SimStatus::kGoalReached);
  CHECK(report.max_log_discrepancy <= 1e-9);
  CHECK(report.max_grasp_error <= 1e-4);
  CHECK(report.completion_time <=
        1.5 * plan.ref.arc_length() / world.params.v_op);
}

TEST_CASE("logged arm states stay within the cone-modified bounds") {
  const World world = load_scenario_file(kScenarioDir + "/open_n2.json");
  const GlobalPlan plan = plan_for(world, 313);
  const SimLog log = run_simulation(world, plan, 7);
  const ConeLimits limits = formation_cone_limits(
      world.formation.grasp, world.formation.base, world.formation.arm);
  const auto& arm = world.formation.arm;
  const double tol = 1e-4;
  for (const auto& s : log.steps) {
    for (size_t i = 0; i < s.config.robots.size(); ++i) {
      const auto& q = s.config.robots[i].q;
      CHECK(q[0] >= arm.q_lower[0] - tol);
      CHECK(q[0] <= arm.q_upper[0] + tol);
      CHECK(q[1] >= arm.q_lower[1] - tol);
      CHECK(q[1] <= arm.q_upper[1] + tol);
      const double dev =
          wrap_angle(q[2] - world.formation.grasp.radial_q3(i));
      CHECK(dev >= limits.dev_lower[i] - tol);
      CHECK(dev <= limits.dev_upper[i] + tol);
    }
  }
}

TEST_CASE("estimation noise stays deterministic per seed") {
  const std::string tmp =
      (fs::temp_directory_path() / "mmrplan_noise_scenario.json").string();
  std::string text = read_text_file(kScenarioDir + "/open_n2.json");
  text = apply_overrides(
      text, {"dynamic_obstacles=[{\"radius\":0.3,\"kind\":\"linear\","
             "\"p0\":[4.5,1.5],\"v0\":[-0.04,0.04]}]",
             "planner_params.estimation_noise_std=0.01"});
  const World world = load_scenario(text);
  CHECK(world.params.estimation_noise_std == doctest::Approx(0.01));
  Rng r1(5);
  GlobalPlan plan = plan_global(world, r1);
  plan.seed = 5;
  const SimLog a = run_simulation(world, plan, 21);
  const SimLog b = run_simulation(world, plan, 21);
  CHECK(a.status == SimStatus::kGoalReached);
  CHECK(simlog_to_csv(a) == simlog_to_csv(b));
  fs::remove(tmp);
}

TEST_CASE("audit flags a hand-injected violating state") {
  const World world = load_scenario_file(kScenarioDir + "/open_n2.json");
  const GlobalPlan plan = plan_for(world, 313);
  SimLog log = run_simulation(world, plan, 7);
  REQUIRE(log.status == SimStatus::kGoalReached);
  const AuditReport clean = audit_log(log, world, plan);
  CHECK(clean.flags.empty());

  // Teleport one robot into the wall band at some middle step.
  SimLog broken = log;
  auto& victim = broken.steps[broken.steps.size() / 2].config.robots[0];
  victim.p = Point2(0.01, 0.01);
  const AuditReport flagged = audit_log(broken, world, plan);
  CHECK(!flagged.flags.empty());
  CHECK(flagged.max_log_discrepancy > 1e-3);  // logged columns now stale
}

TEST_CASE("simlog CSV round trip preserves every number") {
  const World world = load_scenario_file(kScenarioDir + "/open_n2.json");
  const GlobalPlan plan = plan_for(world, 313);
  const SimLog log = run_simulation(world, plan, 7);
  const std::string csv = simlog_to_csv(log);
  const SimLog back = simlog_from_csv(csv);
  REQUIRE(back.steps.size() == log.steps.size());
  CHECK(back.status == log.status);
  CHECK(back.scenario_hash == log.scenario_hash);
  for (size_t i = 0; i < log.steps.size(); ++i) {
    CHECK(back.steps[i].t == log.steps[i].t);
    CHECK((back.steps[i].config.p - log.steps[i].config.p).norm() == 0.0);
    CHECK(back.steps[i].static_margin == log.steps[i].static_margin);
    for (size_t r = 0; r < log.robot_count; ++r)
      CHECK(back.steps[i].grasp_errors[r] == log.steps[i].grasp_errors[r]);
  }
  // Audit of the parsed log reproduces the in-memory audit.
  const AuditReport a = audit_log(log, world, plan);
  const AuditReport b = audit_log(back, world, plan);
  CHECK(a.min_static_margin == b.min_static_margin);
  CHECK(a.max_grasp_error == b.max_grasp_error);
}

TEST_CASE("scenario hash and override plumbing") {
  const std::string text = read_text_file(kScenarioDir + "/open_n2.json");
  CHECK(fnv1a_hash(text) == fnv1a_hash(text));
  CHECK(fnv1a_hash(text) != fnv1a_hash(text + " "));

  const std::string changed =
      apply_overrides(text, {"planner_params.v_op=0.2"});
  const World w = load_scenario(changed);
  CHECK(w.params.v_op == doctest::Approx(0.2));
  CHECK(fnv1a_hash(changed) != fnv1a_hash(text));
}

TEST_CASE("cli commands: validate, plan, simulate, determinism") {
  const std::string scenario = kScenarioDir + "/open_n2.json";
  const std::string tmp = fs::temp_directory_path() /
                          "mmrplan_cli_test";
  fs::remove_all(tmp);

  CHECK(cmd_validate(scenario, {}) == kExitOk);
  CHECK(cmd_validate(kScenarioDir + "/sealed_room.json", {}) == kExitOk);

  // Planning on the sealed room must fail with the planning exit code.
  CHECK(cmd_plan(kScenarioDir + "/sealed_room.json", 1, tmp + "/sealed", {}) ==
        kExitPlanning);

  CHECK(cmd_plan(scenario, 11, tmp + "/a", {}) == kExitOk);
  CHECK(cmd_plan(scenario, 11, tmp + "/b", {}) == kExitOk);
  const std::string plan_a = read_text_file(tmp + "/a/plan.json");
  const std::string plan_b = read_text_file(tmp + "/b/plan.json");
  CHECK(plan_a == plan_b);  // byte-identical plans for the same seed

  CHECK(cmd_simulate(scenario, tmp + "/a/plan.json", 5, tmp + "/sim1",
                     {0.0, 10.0}, {}) == kExitOk);
  CHECK(cmd_simulate(scenario, tmp + "/a/plan.json", 5, tmp + "/sim2",
                     {0.0, 10.0}, {}) == kExitOk);
  CHECK(read_text_file(tmp + "/sim1/sim.csv") ==
        read_text_file(tmp + "/sim2/sim.csv"));
  CHECK(fs::exists(tmp + "/sim1/margins.svg"));
  CHECK(fs::exists(tmp + "/sim1/snapshot_0.svg"));
  CHECK(fs::exists(tmp + "/sim1/snapshot_10.svg"));
  CHECK(fs::exists(tmp + "/sim1/audit.json"));

  // Simulating against a plan built for different effective parameters is
  // rejected by the hash check.
  CHECK(cmd_simulate(scenario, tmp + "/a/plan.json", 5, tmp + "/sim3", {},
                     {"planner_params.v_op=0.2"}) == kExitValidation);
  fs::remove_all(tmp);
}

TEST_CASE("validate rejects broken scenarios with exit code 2") {
  const std::string tmp =
      fs::temp_directory_path() / "mmrplan_bad_scenario.json";
  // Goal buried inside an obstacle.
  std::string text = read_text_file(kScenarioDir + "/open_n2.json");
  text = apply_overrides(text, {"static_obstacles=[[[4.6,4.6],[5.4,4.6],[5.4,5.4],[4.6,5.4]]]"});
  write_text_file(tmp, text);
  CHECK(cmd_validate(tmp, {}) == kExitValidation);
  fs::remove(tmp);
}

TEST_CASE("svg renderers produce well-formed documents") {
  const World world = load_scenario_file(kScenarioDir + "/open_n2.json");
  const GlobalPlan plan = plan_for(world, 313);
  const SimLog log = run_simulation(world, plan, 7);
  for (const std::string& svg :
       {render_plan_svg(world, plan), render_snapshot_svg(world, plan, log, 5.0),
        render_margin_svg(log, world.params)}) {
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
}
