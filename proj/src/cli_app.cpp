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

#include "mmrplan/cli_app.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmrplan/plan_io.hpp"
#include "mmrplan/sim_harness.hpp"
#include "mmrplan/svg.hpp"
#include "mmrplan/world.hpp"

namespace mmrplan {

namespace fs = std::filesystem;
using nlohmann::json;

std::string apply_overrides(const std::string& scenario_text,
                            const std::vector<std::string>& overrides) {
  if (overrides.empty()) return scenario_text;
  json j = json::parse(scenario_text);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ParseError("override must be key=value: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    json parsed;
    try {
      parsed = json::parse(val);
    } catch (const json::exception&) {
      parsed = val;  // plain string value
    }
    json* node = &j;
    std::istringstream path(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    for (size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
    (*node)[parts.back()] = parsed;
  }
  return j.dump(2) + "\n";
}

namespace {

struct LoadedScenario {
  std::string effective_text;
  uint64_t hash = 0;
  World world;
};

LoadedScenario load_effective(const std::string& path,
                              const std::vector<std::string>& overrides) {
  LoadedScenario out;
  out.effective_text = apply_overrides(read_text_file(path), overrides);
  out.hash = fnv1a_hash(out.effective_text);
  out.world = load_scenario(out.effective_text);
  return out;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& scenario_path, uint64_t hash,
                    uint64_t seed, const std::vector<std::string>& overrides) {
  json j;
  j["command"] = command;
  j["scenario"] = scenario_path;
  j["scenario_hash"] = std::to_string(hash);
  j["seed"] = std::to_string(seed);
  j["overrides"] = overrides;
  write_text_file(out_dir + "/manifest_" + command + ".json",
                  j.dump(2) + "\n");
}

}  // namespace

int cmd_validate(const std::string& scenario_path,
                 const std::vector<std::string>& overrides) {
  try {
    load_effective(scenario_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  std::cout << "scenario OK\n";
  return kExitOk;
}

int cmd_plan(const std::string& scenario_path, uint64_t seed,
             const std::string& out_dir,
             const std::vector<std::string>& overrides) {
  LoadedScenario sc;
  try {
    sc = load_effective(scenario_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  fs::create_directories(out_dir);
  try {
    Rng rng(seed);
    GlobalPlan plan = plan_global(sc.world, rng);
    plan.scenario_hash = sc.hash;
    plan.seed = seed;
    write_text_file(out_dir + "/plan.json", serialize_plan(plan));
    write_text_file(out_dir + "/plan.svg", render_plan_svg(sc.world, plan));
    write_manifest(out_dir, "plan", scenario_path, sc.hash, seed, overrides);
  } catch (const std::exception& e) {
    std::cerr << "planning failed: " << e.what() << "\n";
    return kExitPlanning;
  }
  std::cout << "plan written to " << out_dir << "/plan.json\n";
  return kExitOk;
}

int cmd_simulate(const std::string& scenario_path,
                 const std::string& plan_path, uint64_t seed,
                 const std::string& out_dir,
                 const std::vector<double>& snapshot_times,
                 const std::vector<std::string>& overrides) {
  LoadedScenario sc;
  GlobalPlan plan;
  try {
    sc = load_effective(scenario_path, overrides);
    plan = deserialize_plan(read_text_file(plan_path));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  if (plan.scenario_hash != sc.hash) {
    std::cerr << "plan file does not match the scenario (hash mismatch)\n";
    return kExitValidation;
  }
  fs::create_directories(out_dir);
  try {
    const SimLog log = run_simulation(sc.world, plan, seed);
    const AuditReport report = audit_log(log, sc.world, plan);
    write_text_file(out_dir + "/sim.csv", simlog_to_csv(log));
    write_text_file(out_dir + "/margins.svg",
                    render_margin_svg(log, sc.world.params));
    for (double t : snapshot_times) {
      std::ostringstream name;
      name << out_dir << "/snapshot_" << t << ".svg";
      write_text_file(name.str(), render_snapshot_svg(sc.world, plan, log, t));
    }
    write_text_file(out_dir + "/audit.json", report.to_json());
    write_manifest(out_dir, "simulate", scenario_path, sc.hash, seed,
                   overrides);
    // Per-horizon diagnostics run log.
    std::ostringstream diag;
    for (const auto& h : log.horizons)
      diag << "t0=" << h.t0 << " iters=" << h.inner_iterations
           << " violation=" << h.violation << " objective=" << h.objective
           << " wall=" << h.wall_seconds << "\n";
    write_text_file(out_dir + "/run.log", diag.str());
    std::cout << "simulation " << to_string(log.status) << ", artifacts in "
              << out_dir << "\n";
    if (log.status != SimStatus::kGoalReached) return kExitSimulation;
  } catch (const std::exception& e) {
    std::cerr << "simulation failed: " << e.what() << "\n";
    return kExitSimulation;
  }
  return kExitOk;
}

}  // namespace mmrplan
