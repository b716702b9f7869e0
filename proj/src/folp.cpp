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

#include "kmlp/folp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>

#include "kmlp/rng.hpp"

namespace kmlp {

std::string_view status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal_to_tol";
    case LpStatus::kTimeLimit: return "time_limit";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

std::vector<double> LpSolution::row_duals() const {
  std::vector<double> u(y);
  u.insert(u.end(), z.begin(), z.end());
  return u;
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double distance2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

// Residual pieces of an iterate, evaluated either in the scaled space (for
// restart decisions) or mapped back to the original problem (termination).
struct Kkt {
  double primal_norm = 0.0;  // ||r_p||_2
  double dual_norm = 0.0;    // ||r_d||_2
  double primal_obj = 0.0;
  double dual_obj = 0.0;

  double weighted(double omega) const {
    const double g = primal_obj - dual_obj;
    return std::sqrt(omega * omega * primal_norm * primal_norm +
                     dual_norm * dual_norm / (omega * omega) + g * g);
  }
  bool finite() const {
    return std::isfinite(primal_norm) && std::isfinite(dual_norm) &&
           std::isfinite(primal_obj) && std::isfinite(dual_obj);
  }
};

// Rows [0, num_eq) are equalities, the rest are "<=" rows.
// ax = A x and aty = A^T u for the iterate (x, u); row_scale / col_scale map
// scaled quantities back (identity vectors for the scaled evaluation).
Kkt evaluate(std::span<const double> c, std::span<const double> rhs,
             std::span<const double> lower, std::span<const double> upper,
             std::size_t num_eq, std::span<const double> x,
             std::span<const double> u, std::span<const double> ax,
             std::span<const double> atu, std::span<const double> row_scale,
             std::span<const double> col_scale) {
  Kkt k;
  long double pobj = 0.0L, dobj = 0.0L;
  double pr2 = 0.0, dr2 = 0.0;
  for (std::size_t r = 0; r < rhs.size(); ++r) {
    // (A x)_orig = (A~ x~) / R, rhs_orig = rhs~ / R, u_orig = R u~.
    const double res = (ax[r] - rhs[r]) / row_scale[r];
    const double viol = r < num_eq ? res : std::max(res, 0.0);
    pr2 += viol * viol;
    dobj += static_cast<long double>(rhs[r]) * u[r];
  }
  for (std::size_t j = 0; j < c.size(); ++j) {
    pobj += static_cast<long double>(c[j]) * x[j];
    const double lam = (c[j] - atu[j]) / col_scale[j];
    double resid = 0.0;
    if (lam > 0.0) {
      if (std::isfinite(lower[j]))
        dobj += static_cast<long double>(lam) * lower[j] * col_scale[j];
      else
        resid = lam;
    } else if (lam < 0.0) {
      if (std::isfinite(upper[j]))
        dobj += static_cast<long double>(lam) * upper[j] * col_scale[j];
      else
        resid = lam;
    }
    dr2 += resid * resid;
  }
  k.primal_norm = std::sqrt(pr2);
  k.dual_norm = std::sqrt(dr2);
  k.primal_obj = static_cast<double>(pobj);
  k.dual_obj = static_cast<double>(dobj);
  return k;
}

class Pdhg {
 public:
  Pdhg(const LpStandardForm& lp, const LpSolveOptions& opt)
      : lp_(lp), opt_(opt), n_(lp.num_cols()), m_(lp.num_rows()),
        neq_(lp.num_equalities) {
    scale();
  }

  LpSolution run();

 private:
  void scale();
  void project_x(std::span<double> x) const {
    for (std::size_t j = 0; j < n_; ++j) x[j] = std::clamp(x[j], lo_[j], hi_[j]);
  }
  void project_u(std::span<double> u) const {
    for (std::size_t r = neq_; r < m_; ++r) u[r] = std::min(u[r], 0.0);
  }
  Kkt scaled_kkt(std::span<const double> x, std::span<const double> u,
                 std::span<const double> ax, std::span<const double> atu) const {
    return evaluate(c_, q_, lo_, hi_, neq_, x, u, ax, atu, ones_rows_,
                    ones_cols_);
  }
  Kkt original_kkt(std::span<const double> x, std::span<const double> u,
                   std::span<const double> ax,
                   std::span<const double> atu) const {
    // Objective and bound terms are invariant under the scaling; evaluate()
    // undoes R and C on the residuals.
    return evaluate(c_, q_, lo_, hi_, neq_, x, u, ax, atu, row_scale_,
                    col_scale_);
  }
  void fill_solution(LpSolution& sol, std::span<const double> x,
                     std::span<const double> u, const Kkt& orig) const;

  const LpStandardForm& lp_;
  const LpSolveOptions& opt_;
  std::size_t n_, m_, neq_;
  CsrMatrix a_;  // scaled
  std::vector<double> c_, q_, lo_, hi_;
  std::vector<double> row_scale_, col_scale_;
  std::vector<double> ones_rows_, ones_cols_;
  double rhs_norm_ = 0.0, cost_norm_ = 0.0;
};

void Pdhg::scale() {
  a_ = lp_.a;
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  std::vector<double> rmax(m_), cmax(n_);
  auto apply = [&](const std::vector<double>& rs, const std::vector<double>& cs) {
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t p = a_.row_ptr[r]; p < a_.row_ptr[r + 1]; ++p)
        a_.val[p] *= rs[r] * cs[a_.col[p]];
      row_scale_[r] *= rs[r];
    }
    for (std::size_t j = 0; j < n_; ++j) col_scale_[j] *= cs[j];
  };
  for (int it = 0; it < opt_.ruiz_iterations; ++it) {
    std::fill(rmax.begin(), rmax.end(), 0.0);
    std::fill(cmax.begin(), cmax.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t p = a_.row_ptr[r]; p < a_.row_ptr[r + 1]; ++p) {
        const double v = std::abs(a_.val[p]);
        rmax[r] = std::max(rmax[r], v);
        cmax[a_.col[p]] = std::max(cmax[a_.col[p]], v);
      }
    }
    for (double& v : rmax) v = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
    for (double& v : cmax) v = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
    apply(rmax, cmax);
  }
  if (opt_.pock_chambolle) {
    std::fill(rmax.begin(), rmax.end(), 0.0);
    std::fill(cmax.begin(), cmax.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t p = a_.row_ptr[r]; p < a_.row_ptr[r + 1]; ++p) {
        const double v = std::abs(a_.val[p]);
        rmax[r] += v;
        cmax[a_.col[p]] += v;
      }
    }
    for (double& v : rmax) v = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
    for (double& v : cmax) v = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
    apply(rmax, cmax);
  }
  c_.resize(n_);
  lo_.resize(n_);
  hi_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    c_[j] = lp_.c[j] * col_scale_[j];
    lo_[j] = lp_.lower[j] / col_scale_[j];
    hi_[j] = lp_.upper[j] / col_scale_[j];
  }
  q_.resize(m_);
  for (std::size_t r = 0; r < m_; ++r) q_[r] = lp_.rhs[r] * row_scale_[r];
  ones_rows_.assign(m_, 1.0);
  ones_cols_.assign(n_, 1.0);
  rhs_norm_ = norm2(lp_.rhs);
  cost_norm_ = norm2(lp_.c);
}

void Pdhg::fill_solution(LpSolution& sol, std::span<const double> x,
                         std::span<const double> u, const Kkt& orig) const {
  sol.x.resize(n_);
  for (std::size_t j = 0; j < n_; ++j)
    sol.x[j] = std::clamp(x[j] * col_scale_[j], lp_.lower[j], lp_.upper[j]);
  sol.y.resize(neq_);
  sol.z.resize(m_ - neq_);
  for (std::size_t r = 0; r < m_; ++r) {
    const double v = u[r] * row_scale_[r];
    if (r < neq_)
      sol.y[r] = v;
    else
      sol.z[r - neq_] = std::min(v, 0.0);
  }
  sol.primal_objective = orig.primal_obj;
  sol.dual_objective = orig.dual_obj;
  sol.primal_residual = orig.primal_norm / (1.0 + rhs_norm_);
  sol.dual_residual = orig.dual_norm / (1.0 + cost_norm_);
  sol.gap = std::abs(orig.primal_obj - orig.dual_obj) /
            (1.0 + std::abs(orig.primal_obj) + std::abs(orig.dual_obj));
}

LpSolution Pdhg::run() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  std::vector<double> x(n_, 0.0), u(m_, 0.0);
  if (!opt_.warm_x.empty()) {
    if (opt_.warm_x.size() != n_) throw InputError("warm_x has wrong size");
    for (std::size_t j = 0; j < n_; ++j) x[j] = opt_.warm_x[j] / col_scale_[j];
  }
  if (!opt_.warm_y.empty()) {
    if (opt_.warm_y.size() != m_) throw InputError("warm_y has wrong size");
    for (std::size_t r = 0; r < m_; ++r) u[r] = opt_.warm_y[r] / row_scale_[r];
  }
  project_x(x);
  project_u(u);

  const double norm = m_ > 0 ? operator_norm_estimate(a_) : 0.0;
  const double eta = norm > 0.0 ? opt_.step_safety / norm : 1.0;
  double omega = 1.0;
  {
    const double cn = norm2(c_), qn = norm2(q_);
    if (cn > 1e-10 && qn > 1e-10) omega = cn / qn;
  }

  std::vector<double> ax(m_), atu(n_), x_new(n_), u_new(m_), ax_new(m_);
  std::vector<double> x_sum(n_, 0.0), u_sum(m_, 0.0), x_avg(n_), u_avg(m_);
  std::vector<double> ax_avg(m_), atu_avg(n_);
  std::vector<double> x_restart(x), u_restart(u);
  a_.multiply(x, ax);
  a_.multiply_transpose(u, atu);

  LpSolution sol;
  Kkt restart_kkt = scaled_kkt(x, u, ax, atu);
  double kkt_at_restart = restart_kkt.weighted(omega);
  double last_candidate = std::numeric_limits<double>::infinity();
  std::size_t since_restart = 0, iter = 0;

  auto finish = [&](std::span<const double> xs, std::span<const double> us,
                    std::span<const double> axs, std::span<const double> atus,
                    LpStatus status) {
    fill_solution(sol, xs, us, original_kkt(xs, us, axs, atus));
    sol.status = status;
    sol.iterations = iter;
    sol.seconds = elapsed();
    return sol;
  };

  if (m_ == 0 || norm == 0.0) {
    // No constraints: minimize over the box directly.
    for (std::size_t j = 0; j < n_; ++j) x[j] = c_[j] >= 0.0 ? lo_[j] : hi_[j];
    a_.multiply(x, ax);
    return finish(x, u, ax, atu, LpStatus::kOptimal);
  }

  while (true) {
    const double tau = eta / omega, sigma = eta * omega;
    for (std::size_t j = 0; j < n_; ++j)
      x_new[j] = std::clamp(x[j] - tau * (c_[j] - atu[j]), lo_[j], hi_[j]);
    a_.multiply(x_new, ax_new);
    for (std::size_t r = 0; r < m_; ++r) {
      double v = u[r] + sigma * (q_[r] - (2.0 * ax_new[r] - ax[r]));
      if (r >= neq_) v = std::min(v, 0.0);
      u_new[r] = v;
    }
    x.swap(x_new);
    ax.swap(ax_new);
    u.swap(u_new);
    a_.multiply_transpose(u, atu);
    ++iter;
    ++since_restart;
    for (std::size_t j = 0; j < n_; ++j) x_sum[j] += x[j];
    for (std::size_t r = 0; r < m_; ++r) u_sum[r] += u[r];

    if (since_restart % opt_.check_every != 0 && iter < opt_.iteration_limit)
      continue;

    const double inv = 1.0 / static_cast<double>(since_restart);
    for (std::size_t j = 0; j < n_; ++j) x_avg[j] = x_sum[j] * inv;
    for (std::size_t r = 0; r < m_; ++r) u_avg[r] = u_sum[r] * inv;
    a_.multiply(x_avg, ax_avg);
    a_.multiply_transpose(u_avg, atu_avg);

    const Kkt cur_orig = original_kkt(x, u, ax, atu);
    const Kkt avg_orig = original_kkt(x_avg, u_avg, ax_avg, atu_avg);
    if (!cur_orig.finite()) {
      a_.multiply(x_restart, ax_avg);
      a_.multiply_transpose(u_restart, atu_avg);
      return finish(x_restart, u_restart, ax_avg, atu_avg,
                    LpStatus::kNumericalFailure);
    }
    auto converged = [&](const Kkt& k) {
      const double pr = k.primal_norm / (1.0 + rhs_norm_);
      const double dr = k.dual_norm / (1.0 + cost_norm_);
      const double gap = std::abs(k.primal_obj - k.dual_obj) /
                         (1.0 + std::abs(k.primal_obj) + std::abs(k.dual_obj));
      return std::max({pr, dr, gap}) <= opt_.tol;
    };
    if (converged(cur_orig)) return finish(x, u, ax, atu, LpStatus::kOptimal);
    if (avg_orig.finite() && converged(avg_orig))
      return finish(x_avg, u_avg, ax_avg, atu_avg, LpStatus::kOptimal);

    const double kkt_cur = scaled_kkt(x, u, ax, atu).weighted(omega);
    const Kkt avg_scaled = scaled_kkt(x_avg, u_avg, ax_avg, atu_avg);
    const double kkt_avg =
        avg_scaled.finite() ? avg_scaled.weighted(omega)
                            : std::numeric_limits<double>::infinity();
    const bool use_avg = kkt_avg < kkt_cur;
    const double kkt_cand = use_avg ? kkt_avg : kkt_cur;

    const bool limit_hit = iter >= opt_.iteration_limit;
    const bool time_hit = elapsed() >= opt_.time_limit;
    if (limit_hit || time_hit) {
      const LpStatus st = time_hit ? LpStatus::kTimeLimit
                                   : LpStatus::kIterationLimit;
      return use_avg ? finish(x_avg, u_avg, ax_avg, atu_avg, st)
                     : finish(x, u, ax, atu, st);
    }

    const bool restart =
        kkt_cand <= opt_.restart_sufficient * kkt_at_restart ||
        (kkt_cand <= opt_.restart_necessary * kkt_at_restart &&
         kkt_cand > last_candidate) ||
        static_cast<double>(since_restart) >=
            opt_.restart_artificial * static_cast<double>(iter);
    last_candidate = kkt_cand;
    if (!restart) continue;

    if (use_avg) {
      x = x_avg;
      u = u_avg;
      ax = ax_avg;
      atu = atu_avg;
    }
    const double dx = distance2(x, x_restart);
    const double du = distance2(u, u_restart);
    if (dx > 1e-10 && du > 1e-10) {
      const double th = opt_.primal_weight_smoothing;
      omega = std::exp(th * std::log(du / dx) + (1.0 - th) * std::log(omega));
    }
    x_restart = x;
    u_restart = u;
    std::fill(x_sum.begin(), x_sum.end(), 0.0);
    std::fill(u_sum.begin(), u_sum.end(), 0.0);
    since_restart = 0;
    ++sol.restarts;
    kkt_at_restart = scaled_kkt(x, u, ax, atu).weighted(omega);
    last_candidate = std::numeric_limits<double>::infinity();
  }
}

}  // namespace

LpSolution solve(const LpStandardForm& lp, const LpSolveOptions& options) {
  lp.check();
  if (!(options.tol > 0.0)) throw InputError("LP tolerance must be positive");
  if (options.check_every == 0) throw InputError("check_every must be >= 1");
  Pdhg solver(lp, options);
  return solver.run();
}

double safe_lower_bound(const LpStandardForm& lp, const LpSolution& sol) {
  const std::size_t n = lp.num_cols(), m = lp.num_rows();
  const std::size_t neq = lp.num_equalities;
  if (sol.y.size() != neq || sol.z.size() != m - neq)
    throw InputError("safe_lower_bound: dual sizes do not match the LP");
  std::vector<double> u(m);
  for (std::size_t r = 0; r < m; ++r)
    u[r] = r < neq ? sol.y[r] : std::min(sol.z[r - neq], 0.0);
  std::vector<double> atu(n);
  lp.a.multiply_transpose(u, atu);
  long double bound = 0.0L;
  for (std::size_t r = 0; r < m; ++r)
    bound += static_cast<long double>(lp.rhs[r]) * u[r];
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = lp.c[j] - atu[j];
    if (lam > 0.0) {
      if (lp.lower[j] == -std::numeric_limits<double>::infinity())
        return -std::numeric_limits<double>::infinity();
      bound += static_cast<long double>(lam) * lp.lower[j];
    } else if (lam < 0.0) {
      // -r_j * x_bar_j
      if (lp.upper[j] == std::numeric_limits<double>::infinity())
        return -std::numeric_limits<double>::infinity();
      bound += static_cast<long double>(lam) * lp.upper[j];
    }
  }
  return static_cast<double>(bound);
}

double operator_norm_estimate(const CsrMatrix& a, double rel_tol,
                              std::size_t max_iterations) {
  if (a.rows == 0 || a.cols == 0) return 0.0;
  std::vector<double> v(a.cols), w(a.rows), v2(a.cols);
  Rng rng(0x6b6d6c70ULL);
  for (double& e : v) e = 0.5 + rng.uniform();
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  double est = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    a.multiply(v, w);
    a.multiply_transpose(w, v2);
    // Rayleigh quotient v^T A^T A v with ||v|| = 1.
    const double next = std::sqrt(std::max(dot(v, v2), 0.0));
    nv = norm2(v2);
    if (nv == 0.0) return 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = v2[j] / nv;
    if (it > 0 && std::abs(next - est) <= rel_tol * next) return next;
    est = next;
  }
  return est;
}

}  // namespace kmlp
