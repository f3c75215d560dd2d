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

#include "mmrplan/nlp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace mmrplan {

using Eigen::VectorXd;

namespace {

VectorXd clip_to_box(const VectorXd& x, const VectorXd& lo,
                     const VectorXd& hi) {
  if (lo.size() == 0) return x;
  return x.cwiseMax(lo).cwiseMin(hi);
}

double box_violation(const VectorXd& x, const VectorXd& lo,
                     const VectorXd& hi) {
  if (lo.size() == 0) return 0.0;
  return std::max((lo - x).maxCoeff(), (x - hi).maxCoeff());
}

VectorXd finite_diff(const std::function<double(const VectorXd&)>& f,
                     const VectorXd& x) {
  VectorXd g(x.size());
  VectorXd xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double step = 1e-6 * std::max(1.0, std::abs(x[i]));
    const double xi = x[i];
    xp[i] = xi + step;
    const double fp = f(xp);
    xp[i] = xi - step;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// Augmented Lagrangian in PHR form with frozen multipliers.
class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const NlpProblem& p, double mu, const VectorXd& lambda,
                      const VectorXd& nu)
      : p_(p), mu_(mu), lambda_(lambda), nu_(nu) {}

  double value(const VectorXd& x) const {
    double v = p_.objective(x);
    if (p_.equalities) {
      const VectorXd h = p_.equalities(x);
      v += lambda_.dot(h) + 0.5 * mu_ * h.squaredNorm();
    }
    if (p_.inequalities) {
      const VectorXd g = p_.inequalities(x);
      for (int i = 0; i < g.size(); ++i) {
        const double t = nu_[i] + mu_ * g[i];
        if (t > 0.0) v += (t * t - nu_[i] * nu_[i]) / (2.0 * mu_);
      }
    }
    return v;
  }

  VectorXd gradient(const VectorXd& x) const {
    VectorXd grad = p_.objective_grad
                        ? p_.objective_grad(x)
                        : finite_diff(p_.objective, x);
    if (p_.equalities) {
      const VectorXd h = p_.equalities(x);
      const VectorXd w = lambda_ + mu_ * h;
      if (p_.equalities_grad) {
        grad += p_.equalities_grad(x, w);
      } else {
        grad += finite_diff(
            [this, &w](const VectorXd& y) { return w.dot(p_.equalities(y)); },
            x);
      }
    }
    if (p_.inequalities) {
      const VectorXd g = p_.inequalities(x);
      VectorXd w = (nu_ + mu_ * g).cwiseMax(0.0);
      if (p_.inequalities_grad) {
        grad += p_.inequalities_grad(x, w);
      } else {
        grad += finite_diff(
            [this, &w](const VectorXd& y) {
              return w.dot(p_.inequalities(y));
            },
            x);
      }
    }
    return grad;
  }

 private:
  const NlpProblem& p_;
  double mu_;
  const VectorXd& lambda_;
  const VectorXd& nu_;
};

struct InnerResult {
  VectorXd x;
  double projected_grad_norm = 0.0;
  int iterations = 0;
};

InnerResult minimize_projected_lbfgs(const AugmentedLagrangian& al,
                                     VectorXd x, const VectorXd& lo,
                                     const VectorXd& hi, int max_iters,
                                     double tol, int memory) {
  x = clip_to_box(x, lo, hi);
  double fval = al.value(x);
  if (!std::isfinite(fval))
    throw CallbackFailure("nlp_solve: non-finite value at the start point");
  VectorXd grad = al.gradient(x);
  if (!grad.allFinite())
    throw CallbackFailure("nlp_solve: non-finite gradient at the start point");

  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  InnerResult out;

  auto projected_grad_norm = [&](const VectorXd& xx, const VectorXd& gg) {
    return (xx - clip_to_box(xx - gg, lo, hi)).cwiseAbs().maxCoeff();
  };

  int it = 0;
  for (; it < max_iters; ++it) {
    const double pg = projected_grad_norm(x, grad);
    if (pg <= tol) break;

    // Two-loop recursion.
    VectorXd d = -grad;
    if (!s_hist.empty()) {
      std::vector<double> alpha(s_hist.size());
      for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
        alpha[i] = rho_hist[i] * s_hist[i].dot(d);
        d -= alpha[i] * y_hist[i];
      }
      const double gamma = s_hist.back().dot(y_hist.back()) /
                           y_hist.back().squaredNorm();
      d *= gamma;
      for (size_t i = 0; i < s_hist.size(); ++i) {
        const double beta = rho_hist[i] * y_hist[i].dot(d);
        d += (alpha[i] - beta) * s_hist[i];
      }
    }
    if (d.dot(grad) > -1e-14 * d.norm() * grad.norm()) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -grad;
    }

    double step = 1.0;
    VectorXd x_new;
    double f_new = fval;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = clip_to_box(x + step * d, lo, hi);
      const VectorXd dx = x_new - x;
      if (dx.cwiseAbs().maxCoeff() < 1e-16) break;
      f_new = al.value(x_new);
      if (std::isfinite(f_new) && f_new <= fval + 1e-4 * grad.dot(dx)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    VectorXd grad_new = al.gradient(x_new);
    if (!grad_new.allFinite())
      throw CallbackFailure("nlp_solve: non-finite gradient");
    const VectorXd s = x_new - x;
    const VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    fval = f_new;
    grad = std::move(grad_new);
  }
  out.x = x;
  out.projected_grad_norm = projected_grad_norm(x, grad);
  out.iterations = it;
  return out;
}

double constraint_violation(const NlpProblem& p, const VectorXd& x) {
  double v = 0.0;
  if (p.equalities) {
    const VectorXd h = p.equalities(x);
    if (h.size() > 0) v = std::max(v, h.cwiseAbs().maxCoeff());
  }
  if (p.inequalities) {
    const VectorXd g = p.inequalities(x);
    if (g.size() > 0) v = std::max(v, g.maxCoeff());
  }
  return std::max(v, box_violation(x, p.lower, p.upper));
}

}  // namespace

NlpSolution nlp_solve(const NlpProblem& problem, VectorXd x0,
                      const NlpOptions& opts) {
  if (problem.dim <= 0 || x0.size() != problem.dim)
    throw CallbackFailure("nlp_solve: dimension mismatch");
  x0 = clip_to_box(x0, problem.lower, problem.upper);

  const int n_eq =
      problem.equalities ? static_cast<int>(problem.equalities(x0).size()) : 0;
  const int n_ineq = problem.inequalities
                         ? static_cast<int>(problem.inequalities(x0).size())
                         : 0;
  VectorXd lambda = VectorXd::Zero(n_eq);
  VectorXd nu = VectorXd::Zero(n_ineq);
  double mu = opts.penalty_init;

  NlpSolution sol;
  sol.x = x0;
  sol.objective = problem.objective(x0);
  if (!std::isfinite(sol.objective))
    throw CallbackFailure("nlp_solve: non-finite objective at x0");
  sol.violation = constraint_violation(problem, x0);

  VectorXd x = x0;
  bool best_feasible = sol.violation <= opts.tol_feasible;
  double best_obj = sol.objective;
  double best_viol = sol.violation;

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    const AugmentedLagrangian al(problem, mu, lambda, nu);
    const InnerResult inner = minimize_projected_lbfgs(
        al, x, problem.lower, problem.upper, opts.max_inner,
        opts.tol_stationary, opts.lbfgs_memory);
    x = inner.x;
    sol.inner_iterations += inner.iterations;
    sol.outer_iterations = outer + 1;

    const double viol = constraint_violation(problem, x);
    const double obj = problem.objective(x);
    const bool feas = viol <= opts.tol_feasible;
    if ((feas && (!best_feasible || obj < best_obj)) ||
        (!best_feasible && viol < best_viol)) {
      sol.x = x;
      best_obj = obj;
      best_viol = viol;
      best_feasible = best_feasible || feas;
    }
    sol.violation_history.push_back(std::min(
        best_viol, sol.violation_history.empty()
                       ? best_viol
                       : sol.violation_history.back()));

    if (feas && inner.projected_grad_norm <= opts.tol_stationary) {
      sol.status = NlpStatus::kConverged;
      sol.x = x;
      best_obj = obj;
      best_viol = viol;
      break;
    }

    // First-order multiplier updates, then the x10 penalty schedule.
    if (n_eq > 0) lambda += mu * problem.equalities(x);
    if (n_ineq > 0) nu = (nu + mu * problem.inequalities(x)).cwiseMax(0.0);
    mu *= opts.penalty_growth;
  }

  sol.objective = best_obj;
  sol.violation = best_viol;
  if (sol.status != NlpStatus::kConverged)
    sol.status = best_viol <= opts.tol_feasible ? NlpStatus::kMaxIter
                                                : NlpStatus::kInfeasible;
  return sol;
}

}  // namespace mmrplan
