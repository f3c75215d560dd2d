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

#include "mmrplan/world.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mmrplan {

using nlohmann::json;

DynamicState dynamic_state(const DynamicObstacle& obs, double t) {
  DynamicState s;
  if (obs.kind == DynamicObstacle::Kind::kLinear) {
    s.position = obs.p0 + t * obs.v0;
    s.velocity = obs.v0;
  } else {
    // v(t) = A [cos(w t), -sin(w t)]; position is the exact integral.
    const double w = obs.rate;
    const double a = obs.amplitude;
    if (std::abs(w) < 1e-12) {
      s.position = obs.p0 + t * Vec2(a, 0.0);
      s.velocity = Vec2(a, 0.0);
    } else {
      s.position = obs.p0 + (a / w) * Vec2(std::sin(w * t),
                                           std::cos(w * t) - 1.0);
      s.velocity = a * Vec2(std::cos(w * t), -std::sin(w * t));
    }
  }
  return s;
}

std::vector<Point2> predict_positions(const Point2& p, const Vec2& v, int n_h,
                                      double t_c) {
  std::vector<Point2> out;
  out.reserve(n_h);
  for (int k = 1; k <= n_h; ++k) out.push_back(p + v * (k * t_c));
  return out;
}

void PlannerParams::validate() const {
  if (!(t_e < t_h)) throw ValidationError("planner_params: T_e must be < T_h");
  if (!(t_c > 0.0)) throw ValidationError("planner_params: T_c must be > 0");
  const double ratio = t_h / t_c;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 ||
      n_h != static_cast<int>(std::round(ratio)))
    throw ValidationError("planner_params: N_h must equal T_h / T_c");
  const double exec = t_e / t_c;
  if (std::abs(exec - std::round(exec)) > 1e-9)
    throw ValidationError("planner_params: T_e must be a multiple of T_c");
  if (!(v_op > 0.0)) throw ValidationError("planner_params: v_op must be > 0");
  for (double w : w_u)
    if (w < 0.0) throw ValidationError("planner_params: W_u must be >= 0");
  for (double w : w_e)
    if (w < 0.0) throw ValidationError("planner_params: W_e must be >= 0");
  if (w_nh < 0.0) throw ValidationError("planner_params: W_Nh must be >= 0");
}

std::string PlannerParams::to_json() const {
  json j;
  j["n_h"] = n_h;
  j["t_h"] = t_h;
  j["t_e"] = t_e;
  j["t_c"] = t_c;
  j["v_op"] = v_op;
  j["d_safe"] = d_safe;
  j["d_safe_dyn"] = d_safe_dyn;
  j["w_u"] = w_u;
  j["w_e"] = w_e;
  j["w_nh"] = w_nh;
  j["goal_tolerance"] = goal_tolerance;
  if (std::isfinite(sensing_radius)) j["sensing_radius"] = sensing_radius;
  if (estimation_noise_std > 0.0)
    j["estimation_noise_std"] = estimation_noise_std;
  j["coverage_target"] = coverage_target;
  j["max_regions"] = max_regions;
  return j.dump();
}

void FormationSpec::validate() const {
  base.validate();
  arm.validate();
  grasp.validate();
}

bool World::in_free_space(const Point2& p, double clearance) const {
  if (bounds.containment_margin(p) < clearance) return false;
  for (const auto& o : statics)
    if (convex_contains(o.shape, p, clearance)) return false;
  return true;
}

double World::static_clearance(const Point2& p) const {
  double d = bounds.containment_margin(p);
  for (const auto& o : statics) {
    if (convex_contains(o.shape, p, 0.0)) return -1.0;
    d = std::min(d, (closest_point_on_convex(o.shape, p) - p).norm());
  }
  return d;
}

namespace {

bool vertices_convex(const std::vector<Point2>& pts) {
  if (pts.size() < 3) return false;
  const auto hull = convex_hull(pts);
  if (hull.size() != pts.size()) return false;
  return polygon_area(hull) > 1e-12;
}

Point2 parse_point(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(what + ": expected [x, y]");
  return Point2(j[0].get<double>(), j[1].get<double>());
}

std::vector<Point2> parse_points(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of points");
  std::vector<Point2> out;
  for (const auto& e : j) out.push_back(parse_point(e, what));
  return out;
}

template <typename T, size_t N>
void read_array(const json& j, const char* key, std::array<T, N>& out) {
  if (!j.contains(key)) return;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != N)
    throw ParseError(std::string(key) + ": expected " + std::to_string(N) +
                     " numbers");
  for (size_t i = 0; i < N; ++i) out[i] = a[i].get<T>();
}

World parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  World w;
  try {
    w.bounds = ConvexRegion::from_vertices(
        parse_points(j.at("bounds"), "bounds"));
    int next_id = 0;
    for (const auto& e : j.value("static_obstacles", json::array())) {
      StaticObstacle o;
      o.id = next_id++;
      o.shape = parse_points(e, "static_obstacles");
      // Canonicalize winding for convex input; non-convex shapes stay raw so
      // validation can report them.
      if (vertices_convex(o.shape)) o.shape = convex_hull(o.shape);
      w.statics.push_back(std::move(o));
    }
    int dyn_id = 0;
    for (const auto& e : j.value("dynamic_obstacles", json::array())) {
      DynamicObstacle d;
      d.id = dyn_id++;
      d.radius = e.at("radius").get<double>();
      const std::string kind = e.at("kind").get<std::string>();
      d.p0 = parse_point(e.at("p0"), "dynamic_obstacles.p0");
      if (kind == "linear") {
        d.kind = DynamicObstacle::Kind::kLinear;
        d.v0 = parse_point(e.at("v0"), "dynamic_obstacles.v0");
      } else if (kind == "curvilinear") {
        d.kind = DynamicObstacle::Kind::kCurvilinear;
        d.amplitude = e.at("amplitude").get<double>();
        d.rate = e.at("rate").get<double>();
      } else {
        throw ParseError("dynamic_obstacles.kind: unknown kind '" + kind + "'");
      }
      w.dynamics.push_back(std::move(d));
    }
    w.start = parse_point(j.at("start"), "start");
    w.goal = parse_point(j.at("goal"), "goal");

    const auto& f = j.at("formation");
    const size_t n = f.at("n").get<size_t>();
    w.formation.base.footprint =
        parse_points(f.at("base").at("footprint"), "base.footprint");
    read_array(f.at("base"), "u_lower", w.formation.base.u_lower);
    read_array(f.at("base"), "u_upper", w.formation.base.u_upper);
    const auto& arm = f.at("arm");
    read_array(arm, "q_lower", w.formation.arm.q_lower);
    read_array(arm, "q_upper", w.formation.arm.q_upper);
    read_array(arm, "u_lower", w.formation.arm.u_lower);
    read_array(arm, "u_upper", w.formation.arm.u_upper);
    w.formation.grasp.object_footprint =
        parse_points(f.at("object_footprint"), "object_footprint");
    w.formation.grasp.grasp_offsets =
        parse_points(f.at("grasp_offsets"), "grasp_offsets");
    if (w.formation.grasp.grasp_offsets.size() != n)
      throw ParseError("formation: grasp_offsets must list n points");

    if (j.contains("planner_params")) {
      const auto& p = j.at("planner_params");
      auto get = [&p](const char* key, double fallback) {
        return p.contains(key) ? p.at(key).get<double>() : fallback;
      };
      auto& pp = w.params;
      pp.t_h = get("t_h", pp.t_h);
      pp.t_e = get("t_e", pp.t_e);
      pp.t_c = get("t_c", pp.t_c);
      pp.n_h = static_cast<int>(std::round(pp.t_h / pp.t_c));
      pp.v_op = get("v_op", pp.v_op);
      pp.d_safe = get("d_safe", pp.d_safe);
      pp.d_safe_dyn = get("d_safe_dyn", pp.d_safe_dyn);
      pp.w_nh = get("w_nh", pp.w_nh);
      pp.goal_tolerance = get("goal_tolerance", pp.goal_tolerance);
      pp.sensing_radius = get("sensing_radius", pp.sensing_radius);
      pp.estimation_noise_std =
          get("estimation_noise_std", pp.estimation_noise_std);
      pp.coverage_target = get("coverage_target", pp.coverage_target);
      pp.max_regions =
          static_cast<int>(get("max_regions", pp.max_regions));
      read_array(p, "w_u", pp.w_u);
      read_array(p, "w_e", pp.w_e);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  return w;
}

}  // namespace

std::vector<std::string> validate_scenario(const World& w) {
  std::vector<std::string> bad;
  for (const auto& o : w.statics) {
    if (!vertices_convex(o.shape))
      bad.push_back("static obstacle " + std::to_string(o.id) +
                    " is not a convex polygon");
  }
  for (const auto& d : w.dynamics) {
    if (!(d.radius > 0.0))
      bad.push_back("dynamic obstacle " + std::to_string(d.id) +
                    " needs a positive radius");
  }
  if (!w.in_free_space(w.start, 1e-9))
    bad.push_back("start lies outside the free workspace");
  if (!w.in_free_space(w.goal, 1e-9))
    bad.push_back("goal lies outside the free workspace");
  try {
    w.formation.validate();
  } catch (const InvalidSpec& e) {
    bad.push_back(e.what());
  }
  try {
    w.params.validate();
  } catch (const ValidationError& e) {
    bad.push_back(e.what());
  }
  return bad;
}

World load_scenario(const std::string& text) {
  World w = parse_scenario(text);
  const auto bad = validate_scenario(w);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "scenario invalid:";
    for (const auto& b : bad) msg << "\n  - " << b;
    throw ValidationError(msg.str());
  }
  return w;
}

World load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

}  // namespace mmrplan
