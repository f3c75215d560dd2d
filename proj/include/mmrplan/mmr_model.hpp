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

#ifndef MMRPLAN_MMR_MODEL_HPP
#define MMRPLAN_MMR_MODEL_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "mmrplan/geom2d.hpp"

namespace mmrplan {

struct SingularArm : std::runtime_error {
  explicit SingularArm(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidSpec : std::runtime_error {
  explicit InvalidSpec(const std::string& what) : std::runtime_error(what) {}
};
struct ConeInfeasible : std::runtime_error {
  explicit ConeInfeasible(const std::string& what) : std::runtime_error(what) {}
};

/// Reduced RPR arm limits. The shoulder angle q1 is measured in the base
/// frame and the wrist angle q3 as deviation from the radially-extended
/// (arm pointing at the object CoM) configuration, so symmetric boxes stay
/// meaningful for every robot of the formation.
struct ArmSpec {
  std::array<double, 3> q_lower{-2.9, 0.05, -2.9};   // [rad, m, rad]
  std::array<double, 3> q_upper{2.9, 0.345, 2.9};    // [rad, m, rad]
  std::array<double, 3> u_lower{-0.8, -0.15, -0.8};  // [rad/s, m/s, rad/s]
  std::array<double, 3> u_upper{0.8, 0.15, 0.8};

  void validate() const;
};

/// Mobile base footprint (body frame, convex, CCW) and velocity limits.
struct BaseSpec {
  std::vector<Point2> footprint;
  std::array<double, 3> u_lower{-0.4, -0.4, -0.8};  // [m/s, m/s, rad/s]
  std::array<double, 3> u_upper{0.4, 0.4, 0.8};

  /// Circumscribing radius about the base center (max vertex norm).
  double circumradius() const;
  void validate() const;
};

struct MmrState {
  Point2 p = Point2::Zero();  // base position
  double phi = 0.0;           // base yaw
  std::array<double, 3> q{0.0, 0.0, 0.0};
};

/// Object footprint and per-robot grasp offsets in the object frame.
struct GraspSpec {
  std::vector<Point2> object_footprint;  // body frame, convex
  std::vector<Point2> grasp_offsets;     // one per robot

  size_t robot_count() const { return grasp_offsets.size(); }
  double object_circumradius() const;
  /// Polar angle of robot i's grasp offset in the object frame.
  double grasp_angle(size_t i) const;
  /// Wrist angle of the radially-extended configuration for robot i under
  /// the world-frame heading identity phi + q1 + q3 = psi.
  double radial_q3(size_t i) const;
  void validate() const;
};

struct FormationConfig {
  Point2 p = Point2::Zero();  // object CoM
  double psi = 0.0;
  std::vector<MmrState> robots;
};

/// Self-collision cone for one robot with its derived wrist bounds.
/// beta1 is the angle from the grasp ray to the clockwise cone edge, beta2
/// to the counter-clockwise edge; alpha bounds limit the wrist deviation
/// from the radial configuration (positive = base swung clockwise).
struct ConeSpec {
  Cone2 cone;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha_lower = 0.0;
  double alpha_upper = 0.0;
};

Point2 ee_position(const MmrState& s);

/// Recovers [q1,q2,q3] from base pose, EE target and object heading:
/// q2 = |p_ee - p_base|, q1 = atan2(p_ee - p_base) - phi, q3 = psi - phi - q1,
/// angles wrapped to (-pi, pi]. Throws SingularArm when the EE coincides
/// with the base.
std::array<double, 3> inverse_arm(const Point2& p_base, double phi,
                                  const Point2& p_ee, double psi);

/// One RK4 step of q_dot = u over dt; exact (= q + u dt) for the
/// first-order model.
MmrState step(const MmrState& s, const std::array<double, 6>& u, double dt);

/// Circumscribing circles for collision checks: one per base, one for the
/// object, one per arm (center shifted toward the EE by half the base
/// radius fraction, radius 0.5 (q2_max - r_base)).
struct BodyCircles {
  std::vector<Circle> base;  // n entries
  Circle object;
  std::vector<Circle> arm;  // n entries

  std::vector<Circle> all() const;
};
BodyCircles bounding_circles(const FormationConfig& config,
                             const GraspSpec& grasp, const BaseSpec& base,
                             const ArmSpec& arm);

/// Partitions the object's surroundings into n equal cones with apex p,
/// one per robot, each containing its grasp ray.
std::vector<ConeSpec> build_cones(const Point2& p, double psi,
                                  const GraspSpec& grasp);

/// Wrist deviation bounds so the base circumcircle (radius r_v) stays in
/// the cone with the arm fully extended. Sides whose arccos argument falls
/// outside [-1, 1] impose no limit (+/- infinity). Throws ConeInfeasible
/// when lower >= upper.
std::pair<double, double> cone_joint_limits(double beta1, double beta2,
                                            double grasp_radius, double r_v,
                                            double q2_max);

/// build_cones + cone_joint_limits composed against the arm box:
/// effective wrist-deviation interval per robot.
struct ConeLimits {
  std::vector<ConeSpec> cones;
  std::vector<double> dev_lower;  // per robot, after min/max with ArmSpec
  std::vector<double> dev_upper;
};
ConeLimits formation_cone_limits(const GraspSpec& grasp, const BaseSpec& base,
                                 const ArmSpec& arm);

/// max_i | ee_position(robot_i) - (p + R(psi) r_i) |.
double grasp_error(const FormationConfig& config, const GraspSpec& grasp);

/// max_i | wrap(phi_i + q1_i + q3_i - psi) |.
double heading_error(const FormationConfig& config);

/// Builds the formation with every arm radially extended at length q2 and
/// bases facing the object (q1 = 0, zero wrist deviation).
FormationConfig assemble_radial_formation(const Point2& p, double psi,
                                          const GraspSpec& grasp, double q2);

}  // namespace mmrplan

#endif  // MMRPLAN_MMR_MODEL_HPP
