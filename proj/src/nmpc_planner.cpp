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

#include "mmrplan/nmpc_planner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>

namespace mmrplan {

using Eigen::VectorXd;

double tracking_cost(const HorizonPlan& plan, const ReferenceTrajectory& ref,
                     double t0, const PlannerParams& params) {
  const int n_h = static_cast<int>(plan.controls.size());
  double j = 0.0;
  for (int k = 1; k <= n_h; ++k) {
    const Point2 e = plan.states[k].p - ref.position(t0 + k * params.t_c);
    if (k == n_h) {
      j += params.w_nh * e.squaredNorm();
      break;
    }
    for (const auto& u : plan.controls[k])
      for (int c = 0; c < 6; ++c) j += params.w_u[c] * u[c] * u[c];
    j += params.w_e[0] * e.x() * e.x() + params.w_e[1] * e.y() * e.y();
  }
  return j;
}

namespace {

/// One-horizon NLP with the robot states condensed out: decision variables
/// are the base/arm controls (5 per robot per step; the wrist rate is
/// implied by the heading identity) plus the object pose at knots 1..N.
class HorizonProblem {
 public:
  HorizonProblem(const FormationSpec& spec, const PlannerParams& params,
                 const std::vector<ConvexRegion>& corridor,
                 const ConeLimits& cones, double r_base, double r_obj,
                 double r_arm, double arm_shift, const FormationConfig& x0,
                 std::vector<Point2> ref_pts,
                 std::vector<std::vector<Point2>> predictions,
                 std::vector<double> obstacle_radii, std::vector<int> assign,
                 std::vector<std::vector<int>> robot_assign)
      : spec_(spec),
        params_(params),
        corridor_(corridor),
        cones_(cones),
        r_base_(r_base),
        r_obj_(r_obj),
        r_arm_(r_arm),
        arm_shift_(arm_shift),
        x0_(x0),
        ref_(std::move(ref_pts)),
        preds_(std::move(predictions)),
        obs_radii_(std::move(obstacle_radii)),
        assign_(std::move(assign)),
        rob_assign_(std::move(robot_assign)),
        n_(spec.robot_count()),
        nh_(params.n_h),
        tc_(params.t_c) {
    heading_const_.resize(n_);
    radial_.resize(n_);
    for (size_t i = 0; i < n_; ++i) {
      const auto& r = x0.robots[i];
      heading_const_[i] = r.q[2] + r.phi + r.q[0] - x0.psi;
      radial_[i] = spec_.grasp.radial_q3(i);
    }
    n_ineq_ = 0;
    for (int k = 1; k <= nh_; ++k) {
      n_ineq_ +=
          static_cast<int>(corridor_[assign_[k]].halfspaces().size());
      for (size_t i = 0; i < n_; ++i)
        n_ineq_ += static_cast<int>(
            corridor_[rob_assign_[k][i]].halfspaces().size());
    }
    n_ineq_ += nh_ * static_cast<int>(preds_.size()) *
               static_cast<int>(2 * n_ + 1);
    n_ineq_ += nh_ * static_cast<int>(n_) * 6;
    n_ineq_ += nh_ * static_cast<int>(n_) * 2;
  }

  int dim() const { return 5 * static_cast<int>(n_) * nh_ + 3 * nh_; }
  int ctrl_idx(int k, int i, int c) const {
    return k * 5 * static_cast<int>(n_) + 5 * i + c;
  }
  int pose_idx(int k) const {
    return 5 * static_cast<int>(n_) * nh_ + 3 * (k - 1);
  }

  struct Rollout {
    // st[k][i][c], c in {px, py, phi, q1, q2}; flat layout.
    std::vector<double> st;
    std::vector<double> psi;   // k = 0..N
    std::vector<Point2> pose;  // k = 0..N (object CoM)
  };

  void roll(const VectorXd& x, Rollout& r) const {
    const int n = static_cast<int>(n_);
    r.st.assign((nh_ + 1) * n * 5, 0.0);
    r.psi.assign(nh_ + 1, 0.0);
    r.pose.assign(nh_ + 1, Point2::Zero());
    r.psi[0] = x0_.psi;
    r.pose[0] = x0_.p;
    for (int i = 0; i < n; ++i) {
      double* s = &r.st[i * 5];
      s[0] = x0_.robots[i].p.x();
      s[1] = x0_.robots[i].p.y();
      s[2] = x0_.robots[i].phi;
      s[3] = x0_.robots[i].q[0];
      s[4] = x0_.robots[i].q[1];
    }
    for (int k = 1; k <= nh_; ++k) {
      for (int i = 0; i < n; ++i) {
        const double* prev = &r.st[((k - 1) * n + i) * 5];
        double* cur = &r.st[(k * n + i) * 5];
        for (int c = 0; c < 5; ++c)
          cur[c] = prev[c] + tc_ * x[ctrl_idx(k - 1, i, c)];
      }
      r.psi[k] = x[pose_idx(k) + 2];
      r.pose[k] = Point2(x[pose_idx(k)], x[pose_idx(k) + 1]);
    }
  }

  double q3_at(const Rollout& r, int k, int i) const {
    const double* s = &r.st[(k * static_cast<int>(n_) + i) * 5];
    return r.psi[k] - s[2] - s[3] + heading_const_[i];
  }

  double uq3_at(const VectorXd& x, const Rollout& r, int k, int i) const {
    const double psi_next = r.psi[k + 1];
    const double psi_cur = r.psi[k];
    return (psi_next - psi_cur) / tc_ - x[ctrl_idx(k, i, 2)] -
           x[ctrl_idx(k, i, 3)];
  }

  double objective(const VectorXd& x) const {
    Rollout r;
    roll(x, r);
    double j = 0.0;
    for (int k = 1; k < nh_; ++k) {
      for (int i = 0; i < static_cast<int>(n_); ++i) {
        for (int c = 0; c < 5; ++c) {
          const double u = x[ctrl_idx(k, i, c)];
          j += params_.w_u[c] * u * u;
        }
        const double u3 = uq3_at(x, r, k, i);
        j += params_.w_u[5] * u3 * u3;
      }
      const Point2 e = r.pose[k] - ref_[k - 1];
      j += params_.w_e[0] * e.x() * e.x() + params_.w_e[1] * e.y() * e.y();
    }
    const Point2 e = r.pose[nh_] - ref_[nh_ - 1];
    j += params_.w_nh * e.squaredNorm();
    return j;
  }

  VectorXd objective_grad(const VectorXd& x) const {
    Rollout r;
    roll(x, r);
    VectorXd g = VectorXd::Zero(dim());
    for (int k = 1; k < nh_; ++k) {
      for (int i = 0; i < static_cast<int>(n_); ++i) {
        for (int c = 0; c < 5; ++c)
          g[ctrl_idx(k, i, c)] += 2.0 * params_.w_u[c] * x[ctrl_idx(k, i, c)];
        const double gu = 2.0 * params_.w_u[5] * uq3_at(x, r, k, i);
        g[pose_idx(k + 1) + 2] += gu / tc_;
        g[pose_idx(k) + 2] -= gu / tc_;
        g[ctrl_idx(k, i, 2)] -= gu;
        g[ctrl_idx(k, i, 3)] -= gu;
      }
      const Point2 e = r.pose[k] - ref_[k - 1];
      g[pose_idx(k)] += 2.0 * params_.w_e[0] * e.x();
      g[pose_idx(k) + 1] += 2.0 * params_.w_e[1] * e.y();
    }
    const Point2 e = r.pose[nh_] - ref_[nh_ - 1];
    g[pose_idx(nh_)] += 2.0 * params_.w_nh * e.x();
    g[pose_idx(nh_) + 1] += 2.0 * params_.w_nh * e.y();
    return g;
  }

  VectorXd equalities(const VectorXd& x) const {
    Rollout r;
    roll(x, r);
    const int n = static_cast<int>(n_);
    VectorXd h(2 * n * nh_);
    for (int k = 1; k <= nh_; ++k) {
      const Eigen::Rotation2Dd rot(r.psi[k]);
      for (int i = 0; i < n; ++i) {
        const double* s = &r.st[(k * n + i) * 5];
        const double theta = s[2] + s[3];
        const Point2 target = r.pose[k] + rot * spec_.grasp.grasp_offsets[i];
        const int e = 2 * ((k - 1) * n + i);
        h[e] = s[0] + s[4] * std::cos(theta) - target.x();
        h[e + 1] = s[1] + s[4] * std::sin(theta) - target.y();
      }
    }
    return h;
  }

  VectorXd equalities_grad(const VectorXd& x, const VectorXd& w) const {
    Rollout r;
    roll(x, r);
    const int n = static_cast<int>(n_);
    VectorXd g = VectorXd::Zero(dim());
    std::vector<double> sc((nh_ + 1) * n * 5, 0.0);
    for (int k = 1; k <= nh_; ++k) {
      const Eigen::Rotation2Dd rot(r.psi[k]);
      for (int i = 0; i < n; ++i) {
        const double* s = &r.st[(k * n + i) * 5];
        const double theta = s[2] + s[3];
        const double ct = std::cos(theta), st = std::sin(theta);
        const Vec2 rr = rot * spec_.grasp.grasp_offsets[i];
        const int e = 2 * ((k - 1) * n + i);
        const double w1 = w[e], w2 = w[e + 1];
        double* c = &sc[(k * n + i) * 5];
        c[0] += w1;
        c[1] += w2;
        const double dtheta = -s[4] * st * w1 + s[4] * ct * w2;
        c[2] += dtheta;
        c[3] += dtheta;
        c[4] += ct * w1 + st * w2;
        g[pose_idx(k)] -= w1;
        g[pose_idx(k) + 1] -= w2;
        g[pose_idx(k) + 2] += w1 * rr.y() - w2 * rr.x();
      }
    }
    fold_state_cotangents(sc, g);
    return g;
  }

  VectorXd inequalities(const VectorXd& x) const {
    Rollout r;
    roll(x, r);
    const int n = static_cast<int>(n_);
    VectorXd v(n_ineq_);
    int idx = 0;
    // Static containment: object circle against the knot's
    // primary region, each base circle against its own assigned region.
    for (int k = 1; k <= nh_; ++k) {
      for (const auto& f : corridor_[assign_[k]].halfspaces())
        v[idx++] = f.normal.dot(r.pose[k]) -
                   (f.offset - r_obj_ - params_.d_safe);
      for (int i = 0; i < n; ++i) {
        const double* s = &r.st[(k * n + i) * 5];
        for (const auto& f : corridor_[rob_assign_[k][i]].halfspaces())
          v[idx++] = f.normal.x() * s[0] + f.normal.y() * s[1] -
                     (f.offset - r_base_ - params_.d_safe);
      }
    }
    // Dynamic obstacle separation in squared form.
    for (int k = 1; k <= nh_; ++k) {
      for (size_t d = 0; d < preds_.size(); ++d) {
        const Point2& o = preds_[d][k - 1];
        auto term = [&](const Point2& c, double rm) {
          const double rr = obs_radii_[d] + rm + params_.d_safe_dyn;
          return rr * rr - (o - c).squaredNorm();
        };
        v[idx++] = term(r.pose[k], r_obj_);
        for (int i = 0; i < n; ++i) {
          const double* s = &r.st[(k * n + i) * 5];
          v[idx++] = term(Point2(s[0], s[1]), r_base_);
        }
        for (int i = 0; i < n; ++i)
          v[idx++] = term(arm_center(r, k, i), r_arm_);
      }
    }
    // State boxes: shoulder, prismatic, cone-limited wrist deviation.
    for (int k = 1; k <= nh_; ++k) {
      for (int i = 0; i < n; ++i) {
        const double* s = &r.st[(k * n + i) * 5];
        v[idx++] = s[3] - spec_.arm.q_upper[0];
        v[idx++] = spec_.arm.q_lower[0] - s[3];
        v[idx++] = s[4] - spec_.arm.q_upper[1];
        v[idx++] = spec_.arm.q_lower[1] - s[4];
        const double dev = q3_at(r, k, i) - radial_[i];
        v[idx++] = dev - cones_.dev_upper[i];
        v[idx++] = cones_.dev_lower[i] - dev;
      }
    }
    // Implied wrist-rate box.
    for (int k = 0; k < nh_; ++k) {
      for (int i = 0; i < n; ++i) {
        const double u3 = uq3_at(x, r, k, i);
        v[idx++] = u3 - spec_.arm.u_upper[2];
        v[idx++] = spec_.arm.u_lower[2] - u3;
      }
    }
    return v;
  }

  VectorXd inequalities_grad(const VectorXd& x, const VectorXd& w) const {
    Rollout r;
    roll(x, r);
    const int n = static_cast<int>(n_);
    VectorXd g = VectorXd::Zero(dim());
    std::vector<double> sc((nh_ + 1) * n * 5, 0.0);
    int idx = 0;
    for (int k = 1; k <= nh_; ++k) {
      for (const auto& f : corridor_[assign_[k]].halfspaces()) {
        const double wv = w[idx++];
        if (wv != 0.0) {
          g[pose_idx(k)] += wv * f.normal.x();
          g[pose_idx(k) + 1] += wv * f.normal.y();
        }
      }
      for (int i = 0; i < n; ++i) {
        double* c = &sc[(k * n + i) * 5];
        for (const auto& f : corridor_[rob_assign_[k][i]].halfspaces()) {
          const double wv = w[idx++];
          if (wv != 0.0) {
            c[0] += wv * f.normal.x();
            c[1] += wv * f.normal.y();
          }
        }
      }
    }
    for (int k = 1; k <= nh_; ++k) {
      for (size_t d = 0; d < preds_.size(); ++d) {
        const Point2& o = preds_[d][k - 1];
        {
          const double wv = w[idx++];
          if (wv != 0.0) {
            const Vec2 dd = 2.0 * (o - r.pose[k]);
            g[pose_idx(k)] += wv * dd.x();
            g[pose_idx(k) + 1] += wv * dd.y();
          }
        }
        for (int i = 0; i < n; ++i) {
          const double wv = w[idx++];
          if (wv != 0.0) {
            const double* s = &r.st[(k * n + i) * 5];
            const Vec2 dd = 2.0 * (o - Point2(s[0], s[1]));
            double* c = &sc[(k * n + i) * 5];
            c[0] += wv * dd.x();
            c[1] += wv * dd.y();
          }
        }
        for (int i = 0; i < n; ++i) {
          const double wv = w[idx++];
          if (wv != 0.0) {
            const double* s = &r.st[(k * n + i) * 5];
            const double theta = s[2] + s[3];
            const double ct = std::cos(theta), st = std::sin(theta);
            const Vec2 dd = 2.0 * (o - arm_center(r, k, i));
            double* c = &sc[(k * n + i) * 5];
            c[0] += wv * dd.x();
            c[1] += wv * dd.y();
            const double dth =
                arm_shift_ * s[4] * (-st * dd.x() + ct * dd.y());
            c[2] += wv * dth;
            c[3] += wv * dth;
            c[4] += wv * arm_shift_ * (ct * dd.x() + st * dd.y());
          }
        }
      }
    }
    for (int k = 1; k <= nh_; ++k) {
      for (int i = 0; i < n; ++i) {
        double* c = &sc[(k * n + i) * 5];
        const double w_q1_hi = w[idx++], w_q1_lo = w[idx++];
        c[3] += w_q1_hi - w_q1_lo;
        const double w_q2_hi = w[idx++], w_q2_lo = w[idx++];
        c[4] += w_q2_hi - w_q2_lo;
        const double w_dev_hi = w[idx++], w_dev_lo = w[idx++];
        const double wd = w_dev_hi - w_dev_lo;
        if (wd != 0.0) {
          // dev = psi_k - phi - q1 + const
          g[pose_idx(k) + 2] += wd;
          c[2] -= wd;
          c[3] -= wd;
        }
      }
    }
    for (int k = 0; k < nh_; ++k) {
      for (int i = 0; i < n; ++i) {
        const double w_hi = w[idx++], w_lo = w[idx++];
        const double wu = w_hi - w_lo;
        if (wu != 0.0) {
          g[pose_idx(k + 1) + 2] += wu / tc_;
          if (k >= 1) g[pose_idx(k) + 2] -= wu / tc_;
          g[ctrl_idx(k, i, 2)] -= wu;
          g[ctrl_idx(k, i, 3)] -= wu;
        }
      }
    }
    fold_state_cotangents(sc, g);
    return g;
  }

  Point2 arm_center(const Rollout& r, int k, int i) const {
    const double* s = &r.st[(k * static_cast<int>(n_) + i) * 5];
    const double theta = s[2] + s[3];
    return Point2(s[0] + arm_shift_ * s[4] * std::cos(theta),
                  s[1] + arm_shift_ * s[4] * std::sin(theta));
  }

  HorizonPlan extract(const VectorXd& x) const {
    Rollout r;
    roll(x, r);
    const int n = static_cast<int>(n_);
    HorizonPlan plan;
    plan.states.push_back(x0_);
    for (int k = 1; k <= nh_; ++k) {
      FormationConfig c;
      c.p = r.pose[k];
      c.psi = r.psi[k];
      for (int i = 0; i < n; ++i) {
        const double* s = &r.st[(k * n + i) * 5];
        MmrState m;
        m.p = Point2(s[0], s[1]);
        m.phi = s[2];
        m.q = {s[3], s[4], q3_at(r, k, i)};
        c.robots.push_back(m);
      }
      plan.states.push_back(std::move(c));
    }
    for (int k = 0; k < nh_; ++k) {
      std::vector<std::array<double, 6>> uk;
      for (int i = 0; i < n; ++i)
        uk.push_back({x[ctrl_idx(k, i, 0)], x[ctrl_idx(k, i, 1)],
                      x[ctrl_idx(k, i, 2)], x[ctrl_idx(k, i, 3)],
                      x[ctrl_idx(k, i, 4)], uq3_at(x, r, k, i)});
      plan.controls.push_back(std::move(uk));
    }
    plan.region_assignment = assign_;
    plan.robot_regions = rob_assign_;
    plan.objective = objective(x);
    return plan;
  }

  NlpProblem as_nlp(std::shared_ptr<const HorizonProblem> self) const {
    NlpProblem p;
    p.dim = dim();
    p.objective = [self](const VectorXd& x) { return self->objective(x); };
    p.objective_grad = [self](const VectorXd& x) {
      return self->objective_grad(x);
    };
    p.equalities = [self](const VectorXd& x) { return self->equalities(x); };
    p.equalities_grad = [self](const VectorXd& x, const VectorXd& w) {
      return self->equalities_grad(x, w);
    };
    p.inequalities = [self](const VectorXd& x) {
      return self->inequalities(x);
    };
    p.inequalities_grad = [self](const VectorXd& x, const VectorXd& w) {
      return self->inequalities_grad(x, w);
    };
    const double inf = std::numeric_limits<double>::infinity();
    p.lower = VectorXd::Constant(dim(), -inf);
    p.upper = VectorXd::Constant(dim(), inf);
    for (int k = 0; k < nh_; ++k) {
      for (int i = 0; i < static_cast<int>(n_); ++i) {
        for (int c = 0; c < 3; ++c) {
          p.lower[ctrl_idx(k, i, c)] = spec_.base.u_lower[c];
          p.upper[ctrl_idx(k, i, c)] = spec_.base.u_upper[c];
        }
        for (int c = 0; c < 2; ++c) {
          p.lower[ctrl_idx(k, i, 3 + c)] = spec_.arm.u_lower[c];
          p.upper[ctrl_idx(k, i, 3 + c)] = spec_.arm.u_upper[c];
        }
      }
    }
    return p;
  }

 private:
  void fold_state_cotangents(const std::vector<double>& sc, VectorXd& g) const {
    const int n = static_cast<int>(n_);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 5; ++c) {
        double run = 0.0;
        for (int k = nh_; k >= 1; --k) {
          run += sc[(k * n + i) * 5 + c];
          g[ctrl_idx(k - 1, i, c)] += tc_ * run;
        }
      }
    }
  }

  FormationSpec spec_;
  PlannerParams params_;
  std::vector<ConvexRegion> corridor_;
  ConeLimits cones_;
  double r_base_, r_obj_, r_arm_, arm_shift_;
  FormationConfig x0_;
  std::vector<Point2> ref_;                  // knots 1..N
  std::vector<std::vector<Point2>> preds_;   // per obstacle, knots 1..N
  std::vector<double> obs_radii_;
  std::vector<int> assign_;                   // per knot 0..N
  std::vector<std::vector<int>> rob_assign_;  // per knot, per robot
  size_t n_;
  int nh_;
  double tc_;
  std::vector<double> heading_const_;
  std::vector<double> radial_;
  int n_ineq_ = 0;
};

}  // namespace

NmpcPlanner::NmpcPlanner(const FormationSpec& spec,
                         const PlannerParams& params,
                         std::vector<ConvexRegion> corridor)
    : spec_(spec),
      params_(params),
      corridor_(std::move(corridor)),
      cone_limits_(formation_cone_limits(spec.grasp, spec.base, spec.arm)) {
  if (corridor_.empty())
    throw PlanInfeasible("NmpcPlanner: empty region corridor");
  r_base_ = spec_.base.circumradius();
  r_obj_ = spec_.grasp.object_circumradius();
  r_arm_ = 0.5 * (spec_.arm.q_upper[1] - r_base_);
  arm_shift_ = 0.5 * (1.0 + r_base_ / spec_.arm.q_upper[1]);
  if (r_arm_ <= 0.0)
    throw InvalidSpec("NmpcPlanner: arm circle radius must be positive");
}

std::vector<int> NmpcPlanner::assign_regions(
    const std::vector<Point2>& knots,
    const std::vector<FormationConfig>* formation_guess) const {
  const int m = static_cast<int>(corridor_.size());
  std::vector<int> assign(knots.size(), 0);
  int current = 0;
  for (size_t k = 0; k < knots.size(); ++k) {
    auto circles_fit = [&](int j) {
      if (!formation_guess) return true;
      const BodyCircles circles = bounding_circles(
          (*formation_guess)[k], spec_.grasp, spec_.base, spec_.arm);
      std::vector<Circle> checked = circles.base;
      checked.push_back(circles.object);
      return contain_circles(corridor_[j], checked, params_.d_safe).margin >=
             -1e-6;
    };
    int chosen = -1;
    // Latest region that both contains the knot and fits the guessed
    // formation; then latest that merely contains the knot.
    for (int j = m - 1; j >= current && chosen < 0; --j)
      if (corridor_[j].contains(knots[k], 1e-9) && circles_fit(j)) chosen = j;
    for (int j = m - 1; j >= current && chosen < 0; --j)
      if (corridor_[j].contains(knots[k], 1e-9)) chosen = j;
    if (chosen < 0) {
      // Outside every remaining corridor region; fall back to the nearest
      // one by containment margin.
      double best = -std::numeric_limits<double>::infinity();
      chosen = current;
      for (int j = current; j < m; ++j) {
        const double margin = corridor_[j].containment_margin(knots[k]);
        if (margin > best) {
          best = margin;
          chosen = j;
        }
      }
    }
    current = chosen;
    assign[k] = chosen;
  }
  return assign;
}

HorizonNlp NmpcPlanner::build_horizon_nlp(
    const FormationConfig& x0, const ReferenceTrajectory& ref, double t0,
    const std::vector<ObstacleSnapshot>& obstacles,
    const HorizonPlan* warm) const {
  const int n = static_cast<int>(spec_.robot_count());
  const int nh = params_.n_h;
  const int shift = static_cast<int>(std::round(params_.t_e / params_.t_c));

  std::vector<Point2> ref_pts;
  for (int k = 1; k <= nh; ++k)
    ref_pts.push_back(ref.position(t0 + k * params_.t_c));

  std::vector<std::vector<Point2>> preds;
  std::vector<double> radii;
  for (const auto& o : obstacles) {
    preds.push_back(predict_positions(o.position, o.velocity, nh, params_.t_c));
    radii.push_back(o.radius);
  }

  // Knot CoM and formation guesses for the monotone region assignment.
  std::vector<Point2> guess(nh + 1);
  std::vector<FormationConfig> formation_guess(nh + 1);
  guess[0] = x0.p;
  formation_guess[0] = x0;
  for (int k = 1; k <= nh; ++k) {
    if (warm) {
      const int src = std::min(k + shift, nh);
      guess[k] = warm->states[src].p;
      formation_guess[k] = warm->states[src];
    } else {
      guess[k] = ref_pts[k - 1];
      // Rigid translation of the current formation along the reference.
      FormationConfig shifted = x0;
      const Vec2 d = guess[k] - x0.p;
      shifted.p += d;
      for (auto& r : shifted.robots) r.p += d;
      formation_guess[k] = shifted;
    }
  }
  const std::vector<int> assignment = assign_regions(guess, &formation_guess);

  // Per-robot monotone assignment: a base circle may hand off to a later
  // corridor region before or after the object does, which is what lets a
  // formation straddle a narrow gap while every body stays covered.
  const int m = static_cast<int>(corridor_.size());
  std::vector<std::vector<int>> robot_assignment(
      nh + 1, std::vector<int>(spec_.robot_count(), 0));
  for (size_t i = 0; i < spec_.robot_count(); ++i) {
    int current = 0;
    for (int k = 0; k <= nh; ++k) {
      const Circle circle{formation_guess[k].robots[i].p, r_base_};
      int chosen = -1;
      for (int j = m - 1; j >= current && chosen < 0; --j) {
        if (contain_circles(corridor_[j], {circle}, params_.d_safe).margin >=
            -1e-6)
          chosen = j;
      }
      if (chosen < 0) {
        // Nothing fits; fall back to the deepest-margin region ahead.
        double best = -std::numeric_limits<double>::infinity();
        chosen = current;
        for (int j = current; j < m; ++j) {
          const double margin =
              contain_circles(corridor_[j], {circle}, params_.d_safe).margin;
          if (margin > best) {
            best = margin;
            chosen = j;
          }
        }
      }
      current = chosen;
      robot_assignment[k][i] = chosen;
    }
  }

  auto hp = std::make_shared<const HorizonProblem>(
      spec_, params_, corridor_, cone_limits_, r_base_, r_obj_, r_arm_,
      arm_shift_, x0, ref_pts, preds, radii, assignment, robot_assignment);

  HorizonNlp out;
  out.problem = hp->as_nlp(hp);
  out.extract = [hp](const VectorXd& x) { return hp->extract(x); };

  VectorXd cold = VectorXd::Zero(hp->dim());
  {
    Point2 prev = x0.p;
    for (int k = 0; k < nh; ++k) {
      const Point2 target = ref_pts[k];
      Vec2 v = (target - prev) / params_.t_c;
      for (int c = 0; c < 2; ++c)
        v[c] = std::clamp(v[c], spec_.base.u_lower[c], spec_.base.u_upper[c]);
      for (int i = 0; i < n; ++i) {
        cold[hp->ctrl_idx(k, i, 0)] = v.x();
        cold[hp->ctrl_idx(k, i, 1)] = v.y();
      }
      const Point2 reached = prev + params_.t_c * v;
      cold[hp->pose_idx(k + 1)] = reached.x();
      cold[hp->pose_idx(k + 1) + 1] = reached.y();
      cold[hp->pose_idx(k + 1) + 2] = x0.psi;
      prev = reached;
    }
  }
  out.cold_start = std::move(cold);

  if (warm) {
    VectorXd x = VectorXd::Zero(hp->dim());
    for (int k = 0; k < nh; ++k) {
      const int src = std::min(k + shift, nh - 1);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < 5; ++c)
          x[hp->ctrl_idx(k, i, c)] = warm->controls[src][i][c];
      const auto& s = warm->states[std::min(k + 1 + shift, nh)];
      if (k + 1 + shift <= nh) {
        x[hp->pose_idx(k + 1)] = s.p.x();
        x[hp->pose_idx(k + 1) + 1] = s.p.y();
        x[hp->pose_idx(k + 1) + 2] = s.psi;
      } else {
        const Point2 ref_p = ref_pts[k];
        x[hp->pose_idx(k + 1)] = ref_p.x();
        x[hp->pose_idx(k + 1) + 1] = ref_p.y();
        x[hp->pose_idx(k + 1) + 2] = s.psi;
      }
    }
    out.warm_start = std::move(x);
  }
  return out;
}

HorizonPlan NmpcPlanner::plan_horizon(
    const FormationConfig& x0, const ReferenceTrajectory& ref, double t0,
    const std::vector<ObstacleSnapshot>& obstacles,
    const HorizonPlan* warm) const {
  const HorizonNlp nlp = build_horizon_nlp(x0, ref, t0, obstacles, warm);

  NlpOptions opts;
  opts.tol_feasible = 5e-5;
  opts.tol_stationary = 3e-4;
  opts.max_inner = 400;

  const double accept = 6e-5;
  NlpSolution sol = nlp_solve(
      nlp.problem, nlp.warm_start ? *nlp.warm_start : nlp.cold_start, opts);
  if (nlp.warm_start && sol.violation > accept) {
    const NlpSolution retry = nlp_solve(nlp.problem, nlp.cold_start, opts);
    if (retry.violation < sol.violation ||
        (retry.violation <= accept && retry.objective < sol.objective))
      sol = retry;
  }
  if (sol.violation > accept)
    throw PlanInfeasible("plan_horizon: violation " +
                         std::to_string(sol.violation));

  HorizonPlan plan = nlp.extract(sol.x);
  plan.status = sol.status;
  plan.violation = sol.violation;
  plan.inner_iterations = sol.inner_iterations;
  return plan;
}

}  // namespace mmrplan
