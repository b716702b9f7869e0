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

#include "kmlp/heuristics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kmlp/rng.hpp"

namespace kmlp {
namespace {

double sq_dist(std::span<const double> a, const double* b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

void check_k(const PointSet& points, std::size_t k) {
  if (k < 1 || k > points.size()) {
    throw InputError("K must satisfy 1 <= K <= n (K=" + std::to_string(k) +
                     ", n=" + std::to_string(points.size()) + ")");
  }
}

}  // namespace

LloydResult lloyd(const PointSet& points, std::size_t k,
                  std::vector<double> centers, std::size_t max_iters) {
  check_k(points, k);
  const std::size_t n = points.size();
  const std::size_t m = points.dim();
  if (centers.size() != k * m) throw InputError("centers must be K x m");
  if (max_iters < 1) throw InputError("max_iters must be >= 1");

  std::vector<int> assign(n, -1);
  std::vector<int> previous;
  std::vector<double> dist(n);
  std::vector<std::size_t> sizes(k);
  LloydResult result;

  for (std::size_t it = 0; it < max_iters; ++it) {
    previous = assign;
#pragma omp parallel for schedule(static)
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const auto p = points.point(i);
      int best = 0;
      double best_d = sq_dist(p, centers.data());
      for (std::size_t c = 1; c < k; ++c) {
        const double dc = sq_dist(p, centers.data() + c * m);
        if (dc < best_d) {
          best_d = dc;
          best = static_cast<int>(c);
        }
      }
      assign[i] = best;
      dist[i] = best_d;
    }

    std::fill(sizes.begin(), sizes.end(), 0);
    for (int a : assign) ++sizes[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[assign[i]] < 2) continue;
        if (far == n || dist[i] > dist[far]) far = i;
      }
      --sizes[assign[far]];
      assign[far] = static_cast<int>(c);
      sizes[c] = 1;
      dist[far] = 0.0;
    }

    std::fill(centers.begin(), centers.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* ctr = centers.data() + assign[i] * m;
      const auto p = points.point(i);
      for (std::size_t t = 0; t < m; ++t) ctr[t] += p[t];
    }
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t t = 0; t < m; ++t)
        centers[c * m + t] /= static_cast<double>(sizes[c]);

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sse += sq_dist(points.point(i), centers.data() + assign[i] * m);
    result.trace.push_back(2.0 * sse);
    result.iterations = it + 1;
    if (assign == previous) break;
  }

  result.partition = Partition(k, assign);
  result.cost = kmeans_cost(points, result.partition);
  return result;
}

std::vector<double> kmeanspp_seed(const PointSet& points, std::size_t k,
                                  std::uint64_t seed) {
  check_k(points, k);
  const std::size_t n = points.size();
  const std::size_t m = points.dim();
  Rng rng(seed);
  std::vector<double> centers;
  centers.reserve(k * m);
  std::vector<bool> chosen(n, false);
  auto take = [&](std::size_t i) {
    chosen[i] = true;
    const auto p = points.point(i);
    centers.insert(centers.end(), p.begin(), p.end());
  };
  take(rng.below(n));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points.point(i), centers.data());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
      }
    } else {
      // All remaining points coincide with chosen centers.
      std::size_t r = rng.below(n - c);
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i] && r-- == 0) {
          pick = i;
          break;
        }
    }
    take(pick);
    const double* ctr = centers.data() + c * m;
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], sq_dist(points.point(i), ctr));
  }
  return centers;
}

LloydResult kmeanspp_lloyd(const PointSet& points, std::size_t k,
                           const LloydConfig& cfg) {
  check_k(points, k);
  if (cfg.restarts < 1) throw InputError("restarts must be >= 1");
  LloydResult best;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    auto run = lloyd(points, k, kmeanspp_seed(points, k, derive_seed(cfg.seed, r)),
                     cfg.max_iters);
    if (r == 0 || run.cost < best.cost) best = std::move(run);
  }
  return best;
}

std::string_view rounding_mode_name(RoundingMode mode) {
  return mode == RoundingMode::kNormalized ? "normalized" : "unscaled";
}

RoundingMode parse_rounding_mode(std::string_view name) {
  if (name == "normalized") return RoundingMode::kNormalized;
  if (name == "unscaled")
    return RoundingMode::kUnscaled;
  throw InputError("unknown rounding mode: " + std::string(name));
}

RoundResult round_lp_solution(const SymMatrix& x, const PointSet& points,
                              std::size_t k, const LloydConfig& cfg,
                              RoundingMode mode) {
  check_k(points, k);
  const std::size_t n = points.size();
  const std::size_t m = points.dim();
  if (x.size() != n) throw InputError("X and points disagree on n");

  Eigen::MatrixXd dense(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) dense(i, j) = dense(j, i) = x(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  bool ok = eig.info() == Eigen::Success;
  if (ok) ok = eig.eigenvectors().allFinite();
  if (!ok) {
    auto r = kmeanspp_lloyd(points, k, cfg);
    return {std::move(r.partition), r.cost, true};
  }

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      w(points.coords().data(), n, m);
  std::vector<double> centers(k * m);
  for (std::size_t c = 0; c < k; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - c);
    const double sum = v.sum();
    if (sum < 0.0) v = -v;
    if (mode == RoundingMode::kNormalized &&
        std::abs(sum) > 1e-12 * v.lpNorm<1>())
      v /= std::abs(sum);
    const Eigen::RowVectorXd ctr = v.transpose() * w;
    for (std::size_t t = 0; t < m; ++t) centers[c * m + t] = ctr(t);
  }
  auto r = lloyd(points, k, std::move(centers), cfg.max_iters);
  return {std::move(r.partition), r.cost, false};
}

Incumbent upper_bound_update(Incumbent current, Incumbent candidate) {
  if (candidate.cost < current.cost) return candidate;
  return current;
}

}  // namespace kmlp
