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

#include "mmrplan/sim_harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmrplan/rng.hpp"

namespace mmrplan {

using nlohmann::json;

std::string to_string(SimStatus s) {
  switch (s) {
    case SimStatus::kGoalReached:
      return "GoalReached";
    case SimStatus::kPlanFailed:
      return "PlanFailed";
    case SimStatus::kTimeout:
      return "Timeout";
  }
  return "Unknown";
}

namespace {

double circle_static_clearance(const Circle& c, const World& world) {
  double d = world.bounds.containment_margin(c.center) - c.radius;
  for (const auto& o : world.statics) {
    if (convex_contains(o.shape, c.center, 0.0)) return -c.radius;
    d = std::min(
        d, (closest_point_on_convex(o.shape, c.center) - c.center).norm() -
               c.radius);
  }
  return d;
}

double segment_static_clearance(const Point2& a, const Point2& b,
                                const World& world) {
  double d = std::min(world.bounds.containment_margin(a),
                      world.bounds.containment_margin(b));
  for (const auto& o : world.statics)
    d = std::min(d, segment_polygon_distance(a, b, o.shape));
  return d;
}

}  // namespace

double static_margin_of(const FormationConfig& config, const World& world) {
  const BodyCircles circles = bounding_circles(
      config, world.formation.grasp, world.formation.base, world.formation.arm);
  double margin = circle_static_clearance(circles.object, world);
  for (size_t i = 0; i < config.robots.size(); ++i) {
    margin = std::min(margin, circle_static_clearance(circles.base[i], world));
    margin = std::min(margin,
                      segment_static_clearance(config.robots[i].p,
                                               ee_position(config.robots[i]),
                                               world));
  }
  return margin;
}

std::vector<double> dynamic_margins_of(const FormationConfig& config,
                                       const World& world, double t) {
  const BodyCircles circles = bounding_circles(
      config, world.formation.grasp, world.formation.base, world.formation.arm);
  const std::vector<Circle> bodies = circles.all();
  std::vector<double> out;
  for (const auto& d : world.dynamics) {
    const Point2 pos = dynamic_state(d, t).position;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : bodies)
      m = std::min(m, (pos - b.center).norm() - d.radius - b.radius);
    out.push_back(m);
  }
  return out;
}

namespace {

SimStep make_step(double t, const FormationConfig& config,
                  std::vector<std::array<double, 6>> controls,
                  const World& world, const ReferenceTrajectory& ref) {
  SimStep s;
  s.t = t;
  s.config = config;
  s.controls = std::move(controls);
  s.static_margin = static_margin_of(config, world);
  s.dyn_margins = dynamic_margins_of(config, world, t);
  s.tracking_error = (config.p - ref.position(t)).norm();
  const Eigen::Rotation2Dd rot(config.psi);
  for (size_t i = 0; i < config.robots.size(); ++i) {
    const Point2 target =
        config.p + rot * world.formation.grasp.grasp_offsets[i];
    s.grasp_errors.push_back(
        (ee_position(config.robots[i]) - target).norm());
  }
  return s;
}

}  // namespace

SimLog run_simulation(const World& world, const GlobalPlan& plan,
                      uint64_t rng_seed) {
  SimLog log;
  log.scenario_hash = plan.scenario_hash;
  log.seed = rng_seed;
  log.params_json = world.params.to_json();
  log.robot_count = world.formation.robot_count();
  log.dyn_count = world.dynamics.size();

  std::vector<ConvexRegion> corridor;
  for (int id : plan.corridor) corridor.push_back(plan.regions.regions[id]);
  if (corridor.empty() && !plan.regions.regions.empty())
    corridor.push_back(plan.regions.regions[0]);
  NmpcPlanner planner(world.formation, world.params, corridor);

  Rng rng(rng_seed);
  const PlannerParams& pp = world.params;
  const int exec_steps = static_cast<int>(std::round(pp.t_e / pp.t_c));
  const double max_time = 3.0 * std::max(plan.ref.total_time(), pp.t_h);

  FormationConfig x = plan.start_formation;
  double t = 0.0;
  log.steps.push_back(make_step(t, x, {}, world, plan.ref));
  log.status = SimStatus::kTimeout;

  if ((x.p - world.goal).norm() <= pp.goal_tolerance) {
    log.status = SimStatus::kGoalReached;
    return log;
  }

  HorizonPlan warm;
  bool have_warm = false;
  while (t <= max_time) {
    // Estimate the visible obstacles at the start of the horizon.
    std::vector<ObstacleSnapshot> snaps;
    for (const auto& d : world.dynamics) {
      const DynamicState ds = dynamic_state(d, t);
      if ((ds.position - x.p).norm() > pp.sensing_radius) continue;
      ObstacleSnapshot snap{ds.position, ds.velocity, d.radius};
      if (pp.estimation_noise_std > 0.0) {
        snap.position.x() += rng.normal(0.0, pp.estimation_noise_std);
        snap.position.y() += rng.normal(0.0, pp.estimation_noise_std);
      }
      snaps.push_back(snap);
    }

    HorizonPlan horizon;
    const auto wall0 = std::chrono::steady_clock::now();
    try {
      horizon = planner.plan_horizon(x, plan.ref, t, snaps,
                                     have_warm ? &warm : nullptr);
    } catch (const PlanInfeasible&) {
      log.status = SimStatus::kPlanFailed;
      return log;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
            .count();
    log.horizons.push_back(HorizonDiagnostics{
        t, horizon.inner_iterations, horizon.violation, horizon.objective,
        wall});

    for (int j = 1; j <= exec_steps; ++j) {
      for (size_t i = 0; i < x.robots.size(); ++i)
        x.robots[i] = step(x.robots[i], horizon.controls[j - 1][i], pp.t_c);
      x.p = horizon.states[j].p;
      x.psi = horizon.states[j].psi;
      t += pp.t_c;
      log.steps.push_back(
          make_step(t, x, horizon.controls[j - 1], world, plan.ref));
      if ((x.p - world.goal).norm() <= pp.goal_tolerance) {
        log.status = SimStatus::kGoalReached;
        return log;
      }
    }
    warm = horizon;
    have_warm = true;
  }
  return log;
}

// ---------------------------------------------------------------------------
// Audit

AuditReport audit_log(const SimLog& log, const World& world,
                      const GlobalPlan& plan) {
  AuditReport rep;
  rep.status = log.status;
  rep.scenario_hash = log.scenario_hash;
  rep.seed = log.seed;
  rep.min_static_margin = std::numeric_limits<double>::infinity();
  rep.min_dyn_margins.assign(world.dynamics.size(),
                             std::numeric_limits<double>::infinity());

  Point2 prev = Point2::Zero();
  for (size_t s = 0; s < log.steps.size(); ++s) {
    const SimStep& stp = log.steps[s];
    const FormationConfig& c = stp.config;

    // Recompute the margins from raw geometry.
    const BodyCircles circles = bounding_circles(
        c, world.formation.grasp, world.formation.base, world.formation.arm);
    double stat = circle_static_clearance(circles.object, world);
    for (size_t i = 0; i < c.robots.size(); ++i) {
      stat = std::min(stat, circle_static_clearance(circles.base[i], world));
      stat = std::min(stat,
                      segment_static_clearance(
                          c.robots[i].p, ee_position(c.robots[i]), world));
    }
    rep.max_log_discrepancy =
        std::max(rep.max_log_discrepancy, std::abs(stat - stp.static_margin));
    rep.min_static_margin = std::min(rep.min_static_margin, stat);

    const std::vector<Circle> bodies = circles.all();
    for (size_t d = 0; d < world.dynamics.size(); ++d) {
      const Point2 pos = dynamic_state(world.dynamics[d], stp.t).position;
      double m = std::numeric_limits<double>::infinity();
      for (const auto& b : bodies)
        m = std::min(m,
                     (pos - b.center).norm() - world.dynamics[d].radius -
                         b.radius);
      rep.max_log_discrepancy = std::max(
          rep.max_log_discrepancy, std::abs(m - stp.dyn_margins[d]));
      rep.min_dyn_margins[d] = std::min(rep.min_dyn_margins[d], m);
      if (m < world.params.d_safe_dyn - 1e-3)
        rep.flags.push_back("dynamic margin dip at t=" + std::to_string(stp.t) +
                            " obstacle " + std::to_string(d) + ": " +
                            std::to_string(m));
    }

    const double grasp = grasp_error(c, world.formation.grasp);
    const double heading = heading_error(c);
    rep.max_grasp_error = std::max(rep.max_grasp_error, grasp);
    rep.max_heading_error = std::max(rep.max_heading_error, heading);
    rep.max_tracking_error =
        std::max(rep.max_tracking_error,
                 (c.p - plan.ref.position(stp.t)).norm());
    if (grasp > 1e-4)
      rep.flags.push_back("grasp error above 1e-4 at t=" +
                          std::to_string(stp.t));
    if (stat < world.params.d_safe - 1e-3)
      rep.flags.push_back("static margin below d_safe-1e-3 at t=" +
                          std::to_string(stp.t));

    if (s > 0) rep.path_length += (c.p - prev).norm();
    prev = c.p;
    rep.completion_time = stp.t;
  }

  for (const auto& h : log.horizons) {
    rep.wall_per_horizon_mean += h.wall_seconds;
    rep.wall_per_horizon_max = std::max(rep.wall_per_horizon_max,
                                        h.wall_seconds);
  }
  if (!log.horizons.empty())
    rep.wall_per_horizon_mean /= static_cast<double>(log.horizons.size());
  return rep;
}

std::string AuditReport::to_json() const {
  json j;
  j["status"] = to_string(status);
  j["scenario_hash"] = std::to_string(scenario_hash);
  j["seed"] = std::to_string(seed);
  j["min_static_margin"] = min_static_margin;
  j["min_dyn_margins"] = min_dyn_margins;
  j["max_grasp_error"] = max_grasp_error;
  j["max_heading_error"] = max_heading_error;
  j["max_tracking_error"] = max_tracking_error;
  j["path_length"] = path_length;
  j["completion_time"] = completion_time;
  j["wall_per_horizon_mean"] = wall_per_horizon_mean;
  j["wall_per_horizon_max"] = wall_per_horizon_max;
  j["max_log_discrepancy"] = max_log_discrepancy;
  j["flags"] = flags;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string simlog_to_csv(const SimLog& log) {
  std::ostringstream out;
  out << "# mmrplan-simlog-v1\n";
  out << "# scenario_hash=" << log.scenario_hash << "\n";
  out << "# seed=" << log.seed << "\n";
  if (!log.params_json.empty()) out << "# params=" << log.params_json << "\n";
  out << "# n=" << log.robot_count << " ndyn=" << log.dyn_count << "\n";
  out << "t,obj_x,obj_y,psi";
  for (size_t i = 0; i < log.robot_count; ++i)
    out << ",r" << i << "_px,r" << i << "_py,r" << i << "_phi,r" << i
        << "_q1,r" << i << "_q2,r" << i << "_q3";
  for (size_t i = 0; i < log.robot_count; ++i)
    out << ",u" << i << "_vx,u" << i << "_vy,u" << i << "_w,u" << i
        << "_q1,u" << i << "_q2,u" << i << "_q3";
  out << ",d_static";
  for (size_t d = 0; d < log.dyn_count; ++d) out << ",d_dyn" << d;
  out << ",e_track";
  for (size_t i = 0; i < log.robot_count; ++i) out << ",grasp" << i;
  out << "\n";
  for (const auto& s : log.steps) {
    out << fmt_double(s.t) << "," << fmt_double(s.config.p.x()) << ","
        << fmt_double(s.config.p.y()) << "," << fmt_double(s.config.psi);
    for (const auto& r : s.config.robots) {
      out << "," << fmt_double(r.p.x()) << "," << fmt_double(r.p.y()) << ","
          << fmt_double(r.phi);
      for (double q : r.q) out << "," << fmt_double(q);
    }
    if (s.controls.empty()) {
      for (size_t i = 0; i < 6 * log.robot_count; ++i) out << ",0";
    } else {
      for (const auto& u : s.controls)
        for (double v : u) out << "," << fmt_double(v);
    }
    out << "," << fmt_double(s.static_margin);
    for (double m : s.dyn_margins) out << "," << fmt_double(m);
    out << "," << fmt_double(s.tracking_error);
    for (double g : s.grasp_errors) out << "," << fmt_double(g);
    out << "\n";
  }
  out << "# status=" << to_string(log.status) << "\n";
  return out.str();
}

SimLog simlog_from_csv(const std::string& text) {
  SimLog log;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# scenario_hash=", 0) == 0)
        log.scenario_hash = std::stoull(line.substr(16));
      else if (line.rfind("# seed=", 0) == 0)
        log.seed = std::stoull(line.substr(7));
      else if (line.rfind("# params=", 0) == 0)
        log.params_json = line.substr(9);
      else if (line.rfind("# n=", 0) == 0) {
        std::sscanf(line.c_str(), "# n=%zu ndyn=%zu", &log.robot_count,
                    &log.dyn_count);
      } else if (line.rfind("# status=", 0) == 0) {
        const std::string s = line.substr(9);
        if (s == "GoalReached") log.status = SimStatus::kGoalReached;
        else if (s == "PlanFailed") log.status = SimStatus::kPlanFailed;
        else log.status = SimStatus::kTimeout;
      }
      continue;
    }
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    std::vector<double> vals;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    SimStep s;
    size_t c = 0;
    s.t = vals[c++];
    s.config.p = Point2(vals[c], vals[c + 1]);
    c += 2;
    s.config.psi = vals[c++];
    for (size_t i = 0; i < log.robot_count; ++i) {
      MmrState r;
      r.p = Point2(vals[c], vals[c + 1]);
      c += 2;
      r.phi = vals[c++];
      r.q = {vals[c], vals[c + 1], vals[c + 2]};
      c += 3;
      s.config.robots.push_back(r);
    }
    for (size_t i = 0; i < log.robot_count; ++i) {
      std::array<double, 6> u{};
      for (int k = 0; k < 6; ++k) u[k] = vals[c++];
      s.controls.push_back(u);
    }
    s.static_margin = vals[c++];
    for (size_t d = 0; d < log.dyn_count; ++d) s.dyn_margins.push_back(vals[c++]);
    s.tracking_error = vals[c++];
    for (size_t i = 0; i < log.robot_count; ++i)
      s.grasp_errors.push_back(vals[c++]);
    log.steps.push_back(std::move(s));
  }
  return log;
}

}  // namespace mmrplan
