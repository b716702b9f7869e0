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

#include "kmlp/cutplane.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <unordered_set>

#include "kmlp/rng.hpp"

namespace kmlp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double scheduled_tol(double r_g, const SolveConfig& cfg) {
  if (!std::isfinite(r_g)) return cfg.initial_lp_tol;
  const double target = 0.1 * r_g;
  if (target <= cfg.final_lp_tol) return cfg.final_lp_tol;
  const double tol = std::pow(10.0, std::floor(std::log10(target)));
  return std::clamp(tol, cfg.final_lp_tol, cfg.initial_lp_tol);
}

}  // namespace

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kLpExhausted: return "lp_exhausted_not_tight";
    case SolveStatus::kSeparationSkipped: return "separation_over_budget";
    case SolveStatus::kMaxRounds: return "max_rounds";
    case SolveStatus::kLpFailure: return "lp_failure";
  }
  return "unknown";
}

double gap(double f_ub, double f_lb, double tol) {
  if (f_ub == 0.0) {
    return f_lb >= -tol ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (f_ub - f_lb) / f_ub;
}

CutPool drop_slack_cuts(const CutPool& pool, const SymMatrix& x,
                        double eps_act) {
  CutPool kept = pool;
  kept.retain([&](std::size_t r) { return violation(x, pool[r]) >= -eps_act; });
  return kept;
}

SymMatrix solution_matrix(std::size_t n, const std::vector<double>& x) {
  const std::size_t p = SymMatrix::packed_size(n);
  if (x.size() < p) throw InputError("LP solution shorter than n(n+1)/2");
  return SymMatrix(n, std::vector<double>(x.begin(), x.begin() + p));
}

DirectResult solve_full_lp(const DistanceMatrix& d, std::size_t k, std::size_t t,
                           const LpSolveOptions& options) {
  const std::size_t n = d.size();
  if (k < 2 || k > n) throw InputError("K must satisfy 2 <= K <= n");
  if (t < 2 || t > k) throw InputError("t must be in [2, K]");
  if (count_cuts(n, t) > kDirectCutBudget)
    throw InputError("full LP too large (n=" + std::to_string(n) +
                     ", t=" + std::to_string(t) + ")");
  DirectResult r;
  const auto pool = all_cuts(n, t);
  r.num_cuts = pool.size();
  const auto lp = build(d, k, pool);
  r.solution = solve(lp, options);
  r.safe_bound = safe_lower_bound(lp, r.solution);
  r.x = solution_matrix(n, r.solution.x);
  r.tight = is_partition_matrix(r.x, k);
  return r;
}

SolveResult solve_kmeans_lp(const PointSet& points, const SolveConfig& cfg) {
  const auto t_start = Clock::now();
  const std::size_t n = points.size();
  const std::size_t k = cfg.k;
  if (k < 2 || k > n)
    throw InputError("K must satisfy 2 <= K <= n (K=" + std::to_string(k) +
                     ", n=" + std::to_string(n) + ")");
  if (!(cfg.eps_opt > 0.0)) throw InputError("eps_opt must be positive");
  const std::size_t t_limit = cfg.t_max == 0 ? k : cfg.t_max;
  if (t_limit < 2 || t_limit > k) throw InputError("t_max must be in [2, K]");
  if (cfg.t_start < 2 || cfg.t_start > t_limit)
    throw InputError("t_start must be in [2, t_max]");
  const std::size_t p_init = cfg.p_init ? cfg.p_init : 10 * n;
  const std::size_t p_max = cfg.p_max ? cfg.p_max : 50 * n;
  const std::size_t escalate_below =
      cfg.escalation_threshold ? cfg.escalation_threshold
                               : std::max<std::size_t>(1, n / 10);

  SolveResult res;
  const auto d = squared_distances(points);

  LloydConfig lcfg = cfg.lloyd;
  lcfg.seed = derive_seed(cfg.seed, 0);
  auto init = kmeanspp_lloyd(points, k, lcfg);
  Incumbent inc{std::move(init.partition), init.cost};
  res.trace.initial_f_ub = inc.cost;

  res.pool = active_cuts(partition_matrix(inc.partition), 2, kActivityTol, p_init,
                         derive_seed(cfg.seed, 1));
  res.trace.seconds_init = seconds_since(t_start);

  // Cuts that were dropped once and separated again stay for good, which
  // rules out drop/add cycles.
  std::unordered_set<FacetInequality, FacetInequalityHash> dropped, pinned;

  std::size_t t_cur = cfg.t_start;
  double lp_tol = cfg.initial_lp_tol;
  std::vector<double> warm_x;
  std::vector<double> warm_y;
  LloydConfig round_cfg = cfg.lloyd;
  round_cfg.seed = derive_seed(cfg.seed, 2);

  res.status = SolveStatus::kMaxRounds;
  for (std::size_t round = 0; round < cfg.max_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;

    auto t0 = Clock::now();
    const auto lp = build(d, k, res.pool);
    LpSolveOptions opts;
    opts.tol = lp_tol;
    opts.time_limit = cfg.lp_time_limit;
    if (warm_x.size() == lp.num_cols()) opts.warm_x = warm_x;
    if (warm_y.size() == lp.num_rows()) opts.warm_y = warm_y;
    const auto sol = solve(lp, opts);
    const double bound = safe_lower_bound(lp, sol);
    if (cfg.on_lp) cfg.on_lp(lp, sol, bound);
    rec.seconds_lp = seconds_since(t0);
    rec.lp_tol = lp_tol;
    rec.lp_status = sol.status;
    rec.lp_iterations = sol.iterations;
    rec.lp_bound = bound;
    rec.lp_objective = sol.primal_objective;
    rec.cuts_in_lp = res.pool.size();
    rec.t_max = t_cur;
    warm_x = sol.x;
    warm_y = sol.row_duals();

    if (std::isfinite(bound)) res.f_lb = std::max(res.f_lb, bound);
    res.x_lb = solution_matrix(n, sol.x);

    t0 = Clock::now();
    auto rounded = round_lp_solution(res.x_lb, points, k, round_cfg, cfg.rounding);
    inc = upper_bound_update(std::move(inc), {std::move(rounded.partition), rounded.cost});
    rec.seconds_round = seconds_since(t0);

    res.r_g = gap(inc.cost, res.f_lb);
    rec.f_lb = res.f_lb;
    rec.f_ub = inc.cost;
    rec.r_g = res.r_g;

    if (sol.status == LpStatus::kNumericalFailure) {
      res.trace.rounds.push_back(rec);
      res.status = SolveStatus::kLpFailure;
      break;
    }

    if (res.r_g <= cfg.eps_opt) {
      if (lp_tol > cfg.final_lp_tol && res.r_g > 0.0) {
        // Re-solve tightly so the final X and bound are accurate.
        lp_tol = cfg.final_lp_tol;
        res.trace.rounds.push_back(rec);
        continue;
      }
      res.trace.rounds.push_back(rec);
      res.status = SolveStatus::kConverged;
      break;
    }

    t0 = Clock::now();
    const double eps_drop = std::max(10.0 * lp_tol, cfg.eps_vio);
    const auto kept = res.pool.retain([&](std::size_t r) {
      const auto& cut = res.pool[r];
      if (violation(res.x_lb, cut) >= -eps_drop || pinned.contains(cut))
        return true;
      dropped.insert(cut);
      return false;
    });
    rec.cuts_removed = rec.cuts_in_lp - kept.size();
    std::vector<double> y_next(lp.num_equalities);
    std::copy_n(warm_y.begin(), lp.num_equalities, y_next.begin());
    for (std::size_t old : kept) y_next.push_back(warm_y[lp.num_equalities + old]);

    std::vector<ViolatedCut> fresh;
    auto collect = [&](SeparationReport rep) {
      fresh.clear();
      for (auto& vc : rep.cuts)
        if (!res.pool.contains(vc.cut)) fresh.push_back(std::move(vc));
      rec.violated_found = fresh.size();
    };
    collect(separate_greedy(res.x_lb, t_cur, cfg.eps_vio));
    while (fresh.empty() && t_cur < t_limit) {
      ++t_cur;
      collect(separate_greedy(res.x_lb, t_cur, cfg.eps_vio));
    }
    bool stop = false;
    if (fresh.empty()) {
      if (lp_tol > cfg.final_lp_tol && res.r_g > 0.0) {
        lp_tol = cfg.final_lp_tol;
      } else if (count_cuts(n, t_cur) > cfg.exhaustive_budget) {
        res.status = SolveStatus::kSeparationSkipped;
        stop = true;
      } else {
        rec.exhaustive = true;
        collect(separate_exhaustive(res.x_lb, t_cur, cfg.eps_vio,
                                    std::numeric_limits<std::size_t>::max(),
                                    cfg.exhaustive_budget));
        if (fresh.empty()) {
          res.status = SolveStatus::kLpExhausted;
          stop = true;
        }
      }
    }
    if (fresh.size() > p_max) fresh.resize(p_max);
    for (auto& vc : fresh) {
      if (dropped.contains(vc.cut)) pinned.insert(vc.cut);
      if (res.pool.insert(std::move(vc.cut))) {
        ++rec.cuts_added;
        y_next.push_back(0.0);
      }
    }
    warm_y = std::move(y_next);
    if (!stop && t_cur < t_limit && rec.cuts_added < escalate_below) ++t_cur;
    lp_tol = std::min(lp_tol, scheduled_tol(res.r_g, cfg));
    rec.seconds_separation = seconds_since(t0);
    res.trace.rounds.push_back(rec);
    if (stop) break;
  }

  if (is_partition_matrix(res.x_lb, k)) {
    res.tight = true;
    Partition p = extract_partition(res.x_lb);
    if (p.num_clusters() == k) {
      const double c = kmeans_cost(points, p);
      inc = upper_bound_update(std::move(inc), {std::move(p), c});
    }
  }
  res.partition = std::move(inc.partition);
  res.f_ub = inc.cost;
  res.r_g = gap(res.f_ub, res.f_lb);
  res.trace.seconds_total = seconds_since(t_start);
  return res;
}

}  // namespace kmlp
