// Copyright 2026 The kmlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// First-order LP solver: restarted primal-dual hybrid gradient (PDHG) on the
// saddle problem
//
//   min_{lower <= x <= upper} max_{y, z <= 0}  c^T x - y^T (A_eq x - b)
//                                                     - z^T (A_le x - h).
//
// The constraint matrix is equilibrated (Ruiz, then Pock-Chambolle), step
// sizes are 0.9 / ||A|| split by a primal weight that is re-balanced at each
// restart, and restarts are triggered by decay of the weighted KKT error of
// the current or averaged iterate. Optimality is judged on the unscaled
// problem with relative residuals.
//
// Because every column has finite bounds, the dual objective
// b^T y + h^T z + sum_j min(lambda_j l_j, lambda_j u_j), lambda = c - A^T(y,z),
// is a valid lower bound for any z <= 0; safe_lower_bound() evaluates it.

#ifndef KMLP_FOLP_HPP
#define KMLP_FOLP_HPP

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "kmlp/lp_model.hpp"

namespace kmlp {

enum class LpStatus { kOptimal, kTimeLimit, kIterationLimit, kNumericalFailure };

std::string_view status_name(LpStatus status);

struct LpSolveOptions {
  double tol = 1e-8;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  std::size_t iteration_limit = 5'000'000;
  // Optional warm start; sizes must match the LP (x: columns, y: rows).
  std::vector<double> warm_x;
  std::vector<double> warm_y;

  int ruiz_iterations = 10;
  bool pock_chambolle = true;
  std::size_t check_every = 64;
  double restart_sufficient = 0.2;
  double restart_necessary = 0.8;
  double restart_artificial = 0.36;
  double primal_weight_smoothing = 0.5;
  double step_safety = 0.9;
};

struct LpSolution {
  std::vector<double> x;
  std::vector<double> y;  // equality duals (free)
  std::vector<double> z;  // inequality duals, <= 0
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  // Relative measures: ||r_p|| / (1 + ||rhs||), ||r_d|| / (1 + ||c||),
  // |p - d| / (1 + |p| + |d|).
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  LpStatus status = LpStatus::kIterationLimit;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  double seconds = 0.0;

  /// Duals of all rows, equalities first (the layout warm_y expects).
  std::vector<double> row_duals() const;
};

LpSolution solve(const LpStandardForm& lp, const LpSolveOptions& options = {});

/// y^T b + z^T h - r^T x_bar with r = max(A^T(y, z) - c, 0), z clamped to
/// <= 0 first. For columns with lower bound 0 and upper bound x_bar this is
/// exactly the Lagrangian dual value; it bounds the LP optimum from below
/// whatever the accuracy of the duals.
double safe_lower_bound(const LpStandardForm& lp, const LpSolution& sol);

/// Largest singular value of `a` by power iteration on A^T A, stopped when
/// the estimate changes by less than rel_tol relatively.
double operator_norm_estimate(const CsrMatrix& a, double rel_tol = 1e-7,
                              std::size_t max_iterations = 5000);
inline double operator_norm_estimate(const LpStandardForm& lp) {
  return operator_norm_estimate(lp.a);
}

}  // namespace kmlp

#endif  // KMLP_FOLP_HPP
