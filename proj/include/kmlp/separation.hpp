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

// Separation of facet inequalities at a fractional X. Both routines are
// stateless; filtering against an existing CutPool is the caller's job.

#ifndef KMLP_SEPARATION_HPP
#define KMLP_SEPARATION_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "kmlp/core_types.hpp"
#include "kmlp/lp_model.hpp"

namespace kmlp {

inline constexpr double kViolationTol = 1e-6;
inline constexpr double kExhaustiveBudget = 2e7;

struct ViolatedCut {
  FacetInequality cut;
  double violation = 0.0;
};

struct SeparationReport {
  /// Sorted by violation (descending), then apex, then S lexicographically.
  std::vector<ViolatedCut> cuts;
  bool truncated = false;
  bool exhaustive = false;
};

/// Sorts into report order.
void sort_most_violated(std::vector<ViolatedCut>& cuts);

/// Greedy growth per ordered pair (i, j): start from S = {j} and repeatedly
/// append the k > last(S), k != i, with the largest gain
/// X_ik - sum_{l in S} X_lk (smallest k on ties), recording every S along the
/// way with 2 <= |S| <= t_max and w_i(S) > eps_vio. Every reported violation
/// is recomputed from scratch.
SeparationReport separate_greedy(const SymMatrix& x, std::size_t t_max,
                                 double eps_vio = kViolationTol);

/// Enumerates every (i, S) with 2 <= |S| <= t_max and returns the `cap` most
/// violated. The report is empty iff no cut is violated by more than eps_vio.
/// Throws InputError if the enumeration would exceed `budget` cuts.
SeparationReport separate_exhaustive(
    const SymMatrix& x, std::size_t t_max, double eps_vio = kViolationTol,
    std::size_t cap = std::numeric_limits<std::size_t>::max(),
    double budget = kExhaustiveBudget);

}  // namespace kmlp

#endif  // KMLP_SEPARATION_HPP
