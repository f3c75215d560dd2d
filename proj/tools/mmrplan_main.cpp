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

#include <CLI11.hpp>

#include "mmrplan/cli_app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Formation transport planner and simulator"};
  app.require_subcommand(1);

  std::string scenario, plan_file, out = "out";
  uint64_t seed = 1;
  std::vector<std::string> overrides;
  std::vector<double> snapshot_times;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario, "Scenario JSON file")->required();
  validate->add_option("--set", overrides, "key=value scenario overrides");

  auto* plan = app.add_subcommand("plan", "Run the offline global planner");
  plan->add_option("scenario", scenario, "Scenario JSON file")->required();
  plan->add_option("--seed", seed, "RNG seed");
  plan->add_option("--out", out, "Output directory");
  plan->add_option("--set", overrides, "key=value scenario overrides");

  auto* sim = app.add_subcommand("simulate", "Run the closed-loop simulation");
  sim->add_option("scenario", scenario, "Scenario JSON file")->required();
  sim->add_option("plan", plan_file, "Plan file from 'plan'")->required();
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--out", out, "Output directory");
  sim->add_option("--snapshot-times", snapshot_times,
                  "Times (s) for snapshot SVGs")
      ->delimiter(',');
  sim->add_option("--set", overrides, "key=value scenario overrides");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return mmrplan::cmd_validate(scenario, overrides);
  if (plan->parsed()) return mmrplan::cmd_plan(scenario, seed, out, overrides);
  if (sim->parsed())
    return mmrplan::cmd_simulate(scenario, plan_file, seed, out,
                                 snapshot_times, overrides);
  return 0;
}
