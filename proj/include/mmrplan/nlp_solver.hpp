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

#ifndef MMRPLAN_NLP_SOLVER_HPP
#define MMRPLAN_NLP_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mmrplan {

struct CallbackFailure : std::runtime_error {
  explicit CallbackFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// Small dense constrained program
///   min f(x)  s.t.  h(x) = 0,  g(x) <= 0,  lower <= x <= upper.
/// Gradient callbacks are optional; missing ones fall back to central
/// finite differences with step 1e-6 max(1, |x_i|). The *_weighted_grad
/// callbacks return the gradient of w.dot(h(x)) (resp. w.dot(g(x))), which
/// is all the augmented Lagrangian needs.
struct NlpProblem {
  using Fn = std::function<double(const Eigen::VectorXd&)>;
  using VecFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using WeightedGradFn = std::function<Eigen::VectorXd(
      const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  int dim = 0;
  Fn objective;
  VecFn objective_grad;             // optional
  VecFn equalities;                 // optional
  WeightedGradFn equalities_grad;   // optional
  VecFn inequalities;               // optional
  WeightedGradFn inequalities_grad; // optional
  Eigen::VectorXd lower;            // empty = unbounded
  Eigen::VectorXd upper;
};

struct NlpOptions {
  int max_outer = 20;
  int max_inner = 200;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  double tol_feasible = 1e-4;
  double tol_stationary = 1e-3;
  int lbfgs_memory = 10;
};

enum class NlpStatus { kConverged, kMaxIter, kInfeasible };

struct NlpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  double violation = 0.0;  // max-norm over equality and inequality residuals
  NlpStatus status = NlpStatus::kMaxIter;
  int outer_iterations = 0;
  int inner_iterations = 0;
  /// Best violation seen up to each outer iteration (non-increasing).
  std::vector<double> violation_history;
};

/// Augmented-Lagrangian outer loop (penalty x10 per outer iteration, first-
/// order multiplier updates) around a projected L-BFGS inner minimizer.
/// Deterministic for identical inputs. Throws CallbackFailure when a
/// callback returns non-finite values at an accepted iterate.
NlpSolution nlp_solve(const NlpProblem& problem, Eigen::VectorXd x0,
                      const NlpOptions& opts = {});

}  // namespace mmrplan

#endif  // MMRPLAN_NLP_SOLVER_HPP
