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

#include "mmrplan/mmr_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmrplan {

void ArmSpec::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(q_lower[i] < q_upper[i]))
      throw InvalidSpec("ArmSpec: q_lower must be < q_upper elementwise");
    if (!(u_lower[i] < u_upper[i]))
      throw InvalidSpec("ArmSpec: u_lower must be < u_upper elementwise");
  }
  if (!(q_lower[1] > 0.0))
    throw InvalidSpec("ArmSpec: prismatic lower bound must be positive");
}

double BaseSpec::circumradius() const {
  double r = 0.0;
  for (const auto& v : footprint) r = std::max(r, v.norm());
  return r;
}

void BaseSpec::validate() const {
  if (footprint.size() < 3 || polygon_area(convex_hull(footprint)) < 1e-9)
    throw InvalidSpec("BaseSpec: footprint must be a convex polygon");
  for (int i = 0; i < 3; ++i)
    if (!(u_lower[i] < u_upper[i]))
      throw InvalidSpec("BaseSpec: u_lower must be < u_upper elementwise");
}

double GraspSpec::object_circumradius() const {
  double r = 0.0;
  for (const auto& v : object_footprint) r = std::max(r, v.norm());
  return r;
}

double GraspSpec::grasp_angle(size_t i) const {
  const Point2& r = grasp_offsets.at(i);
  return std::atan2(r.y(), r.x());
}

double GraspSpec::radial_q3(size_t i) const {
  return wrap_angle(M_PI - grasp_angle(i));
}

void GraspSpec::validate() const {
  if (grasp_offsets.size() < 2)
    throw InvalidSpec("GraspSpec: need at least 2 robots");
  if (object_footprint.size() < 3)
    throw InvalidSpec("GraspSpec: object footprint needs >= 3 vertices");
  const auto hull = convex_hull(object_footprint);
  for (const auto& g : grasp_offsets) {
    if (g.norm() < 1e-9)
      throw InvalidSpec("GraspSpec: grasp offset at the object CoM");
    if (!convex_contains(hull, g, 1e-7))
      throw InvalidSpec("GraspSpec: grasp point outside the object footprint");
  }
  for (size_t i = 0; i < grasp_offsets.size(); ++i)
    for (size_t j = i + 1; j < grasp_offsets.size(); ++j)
      if (std::abs(wrap_angle(grasp_angle(i) - grasp_angle(j))) < 1e-6)
        throw InvalidSpec("GraspSpec: grasp angles must be distinct");
}

Point2 ee_position(const MmrState& s) {
  const double theta = s.phi + s.q[0];
  return s.p + s.q[1] * Point2(std::cos(theta), std::sin(theta));
}

std::array<double, 3> inverse_arm(const Point2& p_base, double phi,
                                  const Point2& p_ee, double psi) {
  const Vec2 d = p_ee - p_base;
  const double q2 = d.norm();
  if (q2 < 1e-9) throw SingularArm("inverse_arm: EE coincides with the base");
  const double q1 = wrap_angle(std::atan2(d.y(), d.x()) - phi);
  const double q3 = wrap_angle(psi - phi - q1);
  return {q1, q2, q3};
}

MmrState step(const MmrState& s, const std::array<double, 6>& u, double dt) {
  // RK4 on q_dot = u; all four stages coincide for constant u, so the step
  // reduces to the exact increment u*dt.
  MmrState out = s;
  out.p.x() += u[0] * dt;
  out.p.y() += u[1] * dt;
  out.phi += u[2] * dt;
  for (int i = 0; i < 3; ++i) out.q[i] += u[3 + i] * dt;
  return out;
}

std::vector<Circle> BodyCircles::all() const {
  std::vector<Circle> out = base;
  out.push_back(object);
  out.insert(out.end(), arm.begin(), arm.end());
  return out;
}

BodyCircles bounding_circles(const FormationConfig& config,
                             const GraspSpec& grasp, const BaseSpec& base,
                             const ArmSpec& arm) {
  const double r_base = base.circumradius();
  const double q2_max = arm.q_upper[1];
  if (!(q2_max > r_base))
    throw InvalidSpec("bounding_circles: q2_max must exceed the base radius");
  BodyCircles out;
  out.object = Circle{config.p, grasp.object_circumradius()};
  const double shift = 0.5 * (1.0 + r_base / q2_max);
  const double r_arm = 0.5 * (q2_max - r_base);
  for (const auto& robot : config.robots) {
    out.base.push_back(Circle{robot.p, r_base});
    const Point2 ee = ee_position(robot);
    out.arm.push_back(Circle{robot.p + shift * (ee - robot.p), r_arm});
  }
  return out;
}

std::vector<ConeSpec> build_cones(const Point2& p, double psi,
                                  const GraspSpec& grasp) {
  grasp.validate();
  const size_t n = grasp.robot_count();
  const double width = 2.0 * M_PI / static_cast<double>(n);
  std::vector<ConeSpec> cones;
  cones.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double ray = psi + grasp.grasp_angle(i);
    // Equal partition: each robot's sector is centered on its grasp ray.
    const double a_cw = ray - 0.5 * width;
    const double a_ccw = ray + 0.5 * width;
    Cone2 cone(p, Vec2(std::cos(a_cw), std::sin(a_cw)),
               Vec2(std::cos(a_ccw), std::sin(a_ccw)));
    cones.push_back(ConeSpec{cone, 0.5 * width, 0.5 * width, 0.0, 0.0});
  }
  return cones;
}

std::pair<double, double> cone_joint_limits(double beta1, double beta2,
                                            double grasp_radius, double r_v,
                                            double q2_max) {
  const double inf = std::numeric_limits<double>::infinity();
  const double s1 = (grasp_radius * std::sin(beta1) - r_v) / q2_max;
  const double s2 = (grasp_radius * std::sin(beta2) - r_v) / q2_max;
  const double upper =
      (s1 >= -1.0 && s1 <= 1.0) ? M_PI / 2.0 + beta1 - std::acos(s1) : inf;
  const double lower =
      (s2 >= -1.0 && s2 <= 1.0) ? -(M_PI / 2.0 + beta2 - std::acos(s2)) : -inf;
  if (lower >= upper)
    throw ConeInfeasible("cone_joint_limits: no admissible wrist deviation");
  return {lower, upper};
}

ConeLimits formation_cone_limits(const GraspSpec& grasp, const BaseSpec& base,
                                 const ArmSpec& arm) {
  ConeLimits out;
  out.cones = build_cones(Point2::Zero(), 0.0, grasp);
  const double r_v = base.circumradius();
  const size_t n = grasp.robot_count();
  for (size_t i = 0; i < n; ++i) {
    auto& spec = out.cones[i];
    const double grasp_radius = grasp.grasp_offsets[i].norm();
    auto [lo, hi] = cone_joint_limits(spec.beta1, spec.beta2, grasp_radius,
                                      r_v, arm.q_upper[1]);
    spec.alpha_lower = lo;
    spec.alpha_upper = hi;
    const double eff_lo = std::max(arm.q_lower[2], lo);
    const double eff_hi = std::min(arm.q_upper[2], hi);
    if (eff_lo >= eff_hi)
      throw ConeInfeasible("formation_cone_limits: wrist box collapsed");
    out.dev_lower.push_back(eff_lo);
    out.dev_upper.push_back(eff_hi);
  }
  return out;
}

double grasp_error(const FormationConfig& config, const GraspSpec& grasp) {
  double worst = 0.0;
  const Eigen::Rotation2Dd rot(config.psi);
  for (size_t i = 0; i < config.robots.size(); ++i) {
    const Point2 target = config.p + rot * grasp.grasp_offsets[i];
    worst = std::max(worst, (ee_position(config.robots[i]) - target).norm());
  }
  return worst;
}

double heading_error(const FormationConfig& config) {
  double worst = 0.0;
  for (const auto& r : config.robots)
    worst = std::max(
        worst, std::abs(wrap_angle(r.phi + r.q[0] + r.q[2] - config.psi)));
  return worst;
}

FormationConfig assemble_radial_formation(const Point2& p, double psi,
                                          const GraspSpec& grasp, double q2) {
  FormationConfig config;
  config.p = p;
  config.psi = psi;
  const Eigen::Rotation2Dd rot(psi);
  for (size_t i = 0; i < grasp.robot_count(); ++i) {
    const Vec2 offset = rot * grasp.grasp_offsets[i];
    const Vec2 outward = offset.normalized();
    MmrState s;
    s.p = p + offset + q2 * outward;
    s.phi = std::atan2(-outward.y(), -outward.x());  // facing the object
    s.q = inverse_arm(s.p, s.phi, p + offset, psi);
    config.robots.push_back(s);
  }
  return config;
}

}  // namespace mmrplan
