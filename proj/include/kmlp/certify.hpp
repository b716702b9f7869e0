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

// Optimality certificates for a given two-cluster partition: the proximity
// condition and a greedy construction of triangle multipliers. Cluster 1 is
// always the smaller cluster (ties: the cluster holding the smallest index).

#ifndef KMLP_CERTIFY_HPP
#define KMLP_CERTIFY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kmlp/core_types.hpp"

namespace kmlp {

struct TwoClusterStats {
  /// members[0] is the smaller cluster, members[1] the larger.
  std::array<std::vector<std::size_t>, 2> members;
  double r1 = 0.0;
  double r2 = 0.0;
  /// Per point: mean distance to its own cluster (itself included) and to
  /// the other cluster.
  std::vector<double> d_in;
  std::vector<double> d_out;
  double eta = 0.0;
};

TwoClusterStats two_cluster_stats(const DistanceMatrix& d, const Partition& p);

/// Values indexed by within-cluster pairs. Entry (l, a, b) refers to the
/// points members[l][a] and members[l][b]; the diagonal is unused.
struct PairValues {
  std::array<std::vector<std::size_t>, 2> members;
  std::array<SymMatrix, 2> values;

  double operator()(int l, std::size_t a, std::size_t b) const {
    return values[l](a, b);
  }
  double& operator()(int l, std::size_t a, std::size_t b) {
    return values[l](a, b);
  }
  std::size_t num_pairs() const;
};

/// slack_ij = mean_{k in other} min{r d_ik + d_in_j, r d_jk + d_in_i} - d_ij
///            - eta_l, with (r, eta_l) = (r2, eta) on cluster 1 and
/// (r1, (r1/r2) eta) on cluster 2.
PairValues proximity_slacks(const DistanceMatrix& d, const TwoClusterStats& s);

/// gamma_ij = 2 * slack_ij.
PairValues gamma_values(const DistanceMatrix& d, const Partition& p);
PairValues gamma_values(const DistanceMatrix& d, const TwoClusterStats& s);

enum class ProximityVerdict { kHoldsStrict, kHolds, kFails };
std::string_view verdict_name(ProximityVerdict v);

inline constexpr double kStrictMargin = 1e-9;

struct ProximityReport {
  ProximityVerdict verdict = ProximityVerdict::kHoldsStrict;
  /// Minimum slack per cluster (+inf when the cluster has < 2 points).
  std::array<double, 2> min_slack{};
  /// Global indices of the worst pair per cluster (n when none).
  std::array<std::array<std::size_t, 2>, 2> worst_pair{};
};

ProximityReport proximity_check(const DistanceMatrix& d, const Partition& p);

enum class CertifyOrder { kMostNegative, kLexicographic };

/// Key of the multiplier on the triangle inequality with apex k and pair
/// {i, j}, in local cluster indices.
struct TripleKey {
  std::uint32_t k, i, j;  // i < j
  friend bool operator==(const TripleKey&, const TripleKey&) = default;
};
struct TripleKeyHash {
  std::size_t operator()(const TripleKey& t) const noexcept;
};

struct CertifyState {
  PairValues gamma;
  PairValues r_bar;
  std::array<std::unordered_map<TripleKey, double, TripleKeyHash>, 2> lambda;
  bool success = false;
  std::size_t repairs = 0;
  /// On failure: the pair (global indices) whose scan found no repair and
  /// its remaining deficit -r_bar.
  std::array<std::size_t, 2> failed_pair{};
  int failed_cluster = -1;
  double deficit = 0.0;
};

/// Greedy repair of negative residuals by triangle multipliers. `gamma` must
/// come from gamma_values on the same partition.
CertifyState certify(PairValues gamma,
                     CertifyOrder order = CertifyOrder::kMostNegative);

/// r_bar recomputed from gamma and the multipliers.
PairValues recompute_residuals(const CertifyState& state);

}  // namespace kmlp

#endif  // KMLP_CERTIFY_HPP
