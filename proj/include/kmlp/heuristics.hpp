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

// Primal heuristics: k-means++ seeding, Lloyd iterations and spectral
// rounding of fractional LP solutions. All costs are on the kmeans_cost scale.

#ifndef KMLP_HEURISTICS_HPP
#define KMLP_HEURISTICS_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "kmlp/core_types.hpp"

namespace kmlp {

struct LloydConfig {
  std::size_t max_iters = 300;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

struct LloydResult {
  Partition partition;
  double cost = 0.0;
  /// Partition cost after every iteration (non-increasing).
  std::vector<double> trace;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm from explicit centers (K x m, row-major). Ties in the
/// assignment go to the smallest center index; an empty cluster is reseeded
/// with the point farthest from its own center. Stops when the assignment no
/// longer changes or after max_iters iterations.
LloydResult lloyd(const PointSet& points, std::size_t k,
                  std::vector<double> centers, std::size_t max_iters);

/// D^2-weighted seeding of K centers.
std::vector<double> kmeanspp_seed(const PointSet& points, std::size_t k,
                                  std::uint64_t seed);

/// Best of cfg.restarts k-means++ + Lloyd runs (earliest wins ties). Restart
/// r uses seed derive_seed(cfg.seed, r).
LloydResult kmeanspp_lloyd(const PointSet& points, std::size_t k,
                           const LloydConfig& cfg = {});

enum class RoundingMode { kNormalized, kUnscaled };

std::string_view rounding_mode_name(RoundingMode mode);
/// Accepts "normalized" and "unscaled".
RoundingMode parse_rounding_mode(std::string_view name);

struct RoundResult {
  Partition partition;
  double cost = 0.0;
  /// True when the eigensolver failed and k-means++ was used instead.
  bool fallback = false;
};

/// Spectral rounding: the K leading eigenvectors v of X seed Lloyd with
/// centers v^T W (kUnscaled) or (v / sum v)^T W (kNormalized, used when
/// sum v is not ~0). Eigenvector signs are fixed so that sum v >= 0.
RoundResult round_lp_solution(const SymMatrix& x, const PointSet& points,
                              std::size_t k, const LloydConfig& cfg = {},
                              RoundingMode mode = RoundingMode::kNormalized);

struct Incumbent {
  Partition partition;
  double cost = 0.0;
};

/// The lower-cost of the two; ties keep `current`.
Incumbent upper_bound_update(Incumbent current, Incumbent candidate);

}  // namespace kmlp

#endif  // KMLP_HEURISTICS_HPP
