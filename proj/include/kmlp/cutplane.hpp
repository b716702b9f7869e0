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

// Cutting-plane solver for the LP relaxation of K-means over partition
// matrices with facet inequalities of size up to t_max.

#ifndef KMLP_CUTPLANE_HPP
#define KMLP_CUTPLANE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "kmlp/core_types.hpp"
#include "kmlp/folp.hpp"
#include "kmlp/heuristics.hpp"
#include "kmlp/lp_model.hpp"
#include "kmlp/separation.hpp"

namespace kmlp {

struct SolveConfig {
  std::size_t k = 2;
  double eps_opt = 1e-4;
  double eps_vio = kViolationTol;
  /// 0 selects the defaults 10 n, 50 n and max(1, n / 10) respectively.
  std::size_t p_init = 0;
  std::size_t p_max = 0;
  std::size_t escalation_threshold = 0;
  double lp_time_limit = std::numeric_limits<double>::infinity();
  std::size_t t_start = 2;
  /// Largest cut size separated; 0 means K.
  std::size_t t_max = 0;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 200;
  LloydConfig lloyd{};
  RoundingMode rounding = RoundingMode::kNormalized;
  /// Tolerance schedule for intermediate LPs: clamp(10^floor(log10(0.1 r_g)),
  /// final_lp_tol, initial_lp_tol). It never loosens.
  double initial_lp_tol = 1e-4;
  double final_lp_tol = 1e-8;
  /// Exhaustive separation is skipped above this many candidate cuts.
  double exhaustive_budget = kExhaustiveBudget;

  /// Optional observer for every LP solve (for auditing safe bounds).
  std::function<void(const LpStandardForm&, const LpSolution&, double)> on_lp;
};

enum class SolveStatus {
  kConverged,           // r_g <= eps_opt
  kLpExhausted,         // no violated cut at t = t_max, gap above eps_opt
  kSeparationSkipped,   // exhaustive search over budget, gap above eps_opt
  kMaxRounds,
  kLpFailure,
};

std::string_view status_name(SolveStatus status);

struct RoundRecord {
  std::size_t round = 0;
  double f_lb = 0.0;
  double f_ub = 0.0;
  double r_g = 0.0;
  double lp_bound = 0.0;      // safe bound of this round's LP
  double lp_objective = 0.0;  // primal objective reported by the solver
  double lp_tol = 0.0;
  LpStatus lp_status = LpStatus::kOptimal;
  std::size_t lp_iterations = 0;
  std::size_t cuts_in_lp = 0;
  std::size_t cuts_removed = 0;
  std::size_t cuts_added = 0;
  std::size_t violated_found = 0;
  std::size_t t_max = 0;
  bool exhaustive = false;
  double seconds_lp = 0.0;
  double seconds_round = 0.0;
  double seconds_separation = 0.0;
};

struct SolveTrace {
  double initial_f_ub = 0.0;
  std::vector<RoundRecord> rounds;
  double seconds_total = 0.0;
  double seconds_init = 0.0;
};

struct SolveResult {
  Partition partition;
  double f_ub = 0.0;
  double f_lb = -std::numeric_limits<double>::infinity();
  double r_g = std::numeric_limits<double>::infinity();
  bool tight = false;
  SolveStatus status = SolveStatus::kMaxRounds;
  SymMatrix x_lb;
  CutPool pool;
  SolveTrace trace;
};

/// (f_ub - f_lb) / f_ub; for f_ub = 0 returns 0 when f_lb >= -tol and +inf
/// otherwise.
double gap(double f_ub, double f_lb, double tol = 1e-9);

/// Keeps the cuts with slack at most eps_act at x (violation >= -eps_act).
CutPool drop_slack_cuts(const CutPool& pool, const SymMatrix& x, double eps_act);

SolveResult solve_kmeans_lp(const PointSet& points, const SolveConfig& cfg);

/// X in packed form from the first n(n+1)/2 LP variables.
SymMatrix solution_matrix(std::size_t n, const std::vector<double>& x);

struct DirectResult {
  LpSolution solution;
  double safe_bound = 0.0;
  SymMatrix x;
  bool tight = false;
  std::size_t num_cuts = 0;
};

inline constexpr double kDirectCutBudget = 2e6;

/// Builds the LP with every facet inequality of size up to t and solves it
/// once. Throws InputError above kDirectCutBudget inequalities.
DirectResult solve_full_lp(const DistanceMatrix& d, std::size_t k, std::size_t t,
                           const LpSolveOptions& options = {});

}  // namespace kmlp

#endif  // KMLP_CUTPLANE_HPP
