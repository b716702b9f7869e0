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

// The LP relaxation over packed symmetric matrices X:
//
//   min  sum_ij d_ij X_ij
//   s.t. Tr(X) = K,  sum_j X_ij = 1 for all i,
//        sum_{j in S} X_ij - X_ii - sum_{j<k in S} X_jk <= 0  for (i, S) in pool,
//        0 <= X_ij <= 1.
//
// Columns follow SymMatrix's packed order. Rows are the trace row, then the
// n row-sum rows, then one row per cut in pool order.

#ifndef KMLP_LP_MODEL_HPP
#define KMLP_LP_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_set>
#include <vector>

#include "kmlp/core_types.hpp"

namespace kmlp {

/// sum_{j in S} X_ij <= X_ii + sum_{j<k in S} X_jk, with S sorted, i not in S.
struct FacetInequality {
  std::uint32_t i = 0;
  std::vector<std::uint32_t> S;

  FacetInequality() = default;
  /// Sorts S and checks |S| >= 2, i not in S, no repeats.
  FacetInequality(std::uint32_t apex, std::vector<std::uint32_t> set);

  friend bool operator==(const FacetInequality&,
                         const FacetInequality&) = default;
  friend auto operator<=>(const FacetInequality&,
                          const FacetInequality&) = default;
};

struct FacetInequalityHash {
  std::size_t operator()(const FacetInequality& c) const noexcept;
};

/// w_i(S) = sum_{j in S} X_ij - X_ii - sum_{j<k in S} X_jk; > 0 is violated.
double violation(const SymMatrix& x, const FacetInequality& cut);

/// Ordered, duplicate-free working set of facet inequalities.
class CutPool {
 public:
  /// Returns false (and leaves the pool unchanged) for a duplicate.
  bool insert(FacetInequality cut);
  bool contains(const FacetInequality& cut) const {
    return keys_.contains(cut);
  }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }
  const std::vector<FacetInequality>& cuts() const { return cuts_; }
  const FacetInequality& operator[](std::size_t r) const { return cuts_[r]; }

  /// Slack bookkeeping: activity[r] = violation of cut r at the last solution.
  const std::vector<double>& activity() const { return activity_; }
  void record_activity(const SymMatrix& x);

  /// Keeps cuts for which keep(index) is true; returns the kept old indices.
  std::vector<std::size_t> retain(
      const std::function<bool(std::size_t)>& keep);

 private:
  std::vector<FacetInequality> cuts_;
  std::vector<double> activity_;
  std::unordered_set<FacetInequality, FacetInequalityHash> keys_;
};

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  /// Appends one row; entries need not be sorted.
  void append_row(std::vector<std::pair<std::uint32_t, double>> entries);
  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T u
  void multiply_transpose(std::span<const double> u, std::span<double> y) const;
  double row_dot(std::size_t r, std::span<const double> x) const;
};

/// min c^T x  s.t.  rows [0, num_equalities) of A x = rhs,
/// remaining rows A x <= rhs,  lower <= x <= upper.
struct LpStandardForm {
  std::vector<double> c;
  CsrMatrix a;
  std::vector<double> rhs;
  std::size_t num_equalities = 0;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_cols() const { return c.size(); }
  std::size_t num_rows() const { return a.rows; }
  std::size_t num_inequalities() const { return a.rows - num_equalities; }
  double objective(std::span<const double> x) const;
  /// Throws InputError on inconsistent dimensions or bounds.
  void check() const;
};

/// The relaxation restricted to the cuts in `pool`. Requires 2 <= K <= n.
LpStandardForm build(const DistanceMatrix& d, std::size_t k,
                     const CutPool& pool);

/// Appends one <= 0 row per cut (same layout build() produces).
void append_cuts(LpStandardForm& lp, std::span<const FacetInequality> cuts);

/// Calls visit(i, S, w) for every (i, S) with 2 <= |S| <= t, S ascending and
/// enumerated in lexicographic order per i.
void for_each_cut(
    const SymMatrix& x, std::size_t t,
    const std::function<void(std::uint32_t, std::span<const std::uint32_t>,
                             double)>& visit);

/// Number of (i, S) pairs with 2 <= |S| <= t on n points.
double count_cuts(std::size_t n, std::size_t t);

inline constexpr double kActivityTol = 1e-9;

/// Cuts with |S| <= t that are tight (|w| <= eps_act) at the partition
/// matrix x; a uniform sample of `cap` of them (seeded) when there are more.
CutPool active_cuts(const SymMatrix& x, std::size_t t, double eps_act,
                    std::size_t cap, std::uint64_t seed);

/// The full relaxation with every cut of size <= t (small n only).
CutPool all_cuts(std::size_t n, std::size_t t);

}  // namespace kmlp

#endif  // KMLP_LP_MODEL_HPP
