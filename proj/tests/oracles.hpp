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

// Test-only reference computations kept independent of the library's
// implementation paths.

#ifndef MMRPLAN_TESTS_ORACLES_HPP
#define MMRPLAN_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "mmrplan/rng.hpp"

namespace mmrplan::oracles {

struct RandomQp {
  Eigen::MatrixXd q;  // SPD
  Eigen::VectorXd c;
  Eigen::VectorXd a;  // single equality a.x = b
  double b = 0.0;
  Eigen::VectorXd lo, hi;
  int d = 0;
};

inline RandomQp make_qp(Rng& rng, int d) {
  RandomQp qp;
  qp.d = d;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform(-1, 1);
  qp.q = m.transpose() * m + 0.3 * Eigen::MatrixXd::Identity(d, d);
  qp.c = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) qp.c[i] = rng.uniform(-1, 1);
  qp.a = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) qp.a[i] = rng.uniform(-1, 1);
  qp.lo = Eigen::VectorXd::Constant(d, -1.0);
  qp.hi = Eigen::VectorXd::Constant(d, 1.0);
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-0.5, 0.5);
  qp.b = qp.a.dot(x);
  return qp;
}

inline double qp_value(const RandomQp& qp, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(qp.q * x) + qp.c.dot(x);
}

/// Refining grid search over the equality-eliminated box. Returns the best
/// objective value and its argument (empty when no feasible grid point).
inline std::pair<double, Eigen::VectorXd> qp_grid_oracle(const RandomQp& qp) {
  using Eigen::VectorXd;
  const int d = qp.d;
  const int free_dims = d - 1;
  int piv = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(qp.a[i]) > std::abs(qp.a[piv])) piv = i;

  auto lift = [&](const VectorXd& z) {
    VectorXd x(d);
    int c = 0;
    double dot = 0.0;
    for (int i = 0; i < d; ++i) {
      if (i == piv) continue;
      x[i] = z[c++];
      dot += qp.a[i] * x[i];
    }
    x[piv] = (qp.b - dot) / qp.a[piv];
    return x;
  };

  double best = std::numeric_limits<double>::infinity();
  VectorXd best_x;
  if (free_dims == 0) {
    const VectorXd x = lift(VectorXd(0));
    bool ok = true;
    for (int i = 0; i < d; ++i)
      ok = ok && x[i] >= -1.0 - 1e-9 && x[i] <= 1.0 + 1e-9;
    if (ok) {
      best = qp_value(qp, x);
      best_x = x;
    }
    return {best, best_x};
  }

  VectorXd lo = VectorXd::Constant(free_dims, -1.0);
  VectorXd hi = VectorXd::Constant(free_dims, 1.0);
  const int pts = free_dims <= 2 ? 200 : (free_dims == 3 ? 41 : 21);
  for (int stage = 0; stage < 4; ++stage) {
    VectorXd best_z = 0.5 * (lo + hi);
    std::vector<int> counter(free_dims, 0);
    bool done = false;
    while (!done) {
      VectorXd z(free_dims);
      for (int i = 0; i < free_dims; ++i)
        z[i] = lo[i] + (hi[i] - lo[i]) * counter[i] / (pts - 1);
      const VectorXd x = lift(z);
      bool ok = true;
      for (int i = 0; i < d; ++i)
        ok = ok && x[i] >= -1.0 - 1e-9 && x[i] <= 1.0 + 1e-9;
      if (ok) {
        const double v = qp_value(qp, x);
        if (v < best) {
          best = v;
          best_x = x;
          best_z = z;
        }
      }
      for (int i = 0; i < free_dims; ++i) {
        if (++counter[i] < pts) break;
        counter[i] = 0;
        if (i == free_dims - 1) done = true;
      }
    }
    for (int i = 0; i < free_dims; ++i) {
      const double span = (hi[i] - lo[i]) / (pts - 1) * 2.5;
      lo[i] = std::max(-1.0, best_z[i] - span);
      hi[i] = std::min(1.0, best_z[i] + span);
    }
  }
  return {best, best_x};
}

}  // namespace mmrplan::oracles

#endif  // MMRPLAN_TESTS_ORACLES_HPP
