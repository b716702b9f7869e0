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

#include "kmlp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmlp/rng.hpp"

namespace kmlp {
namespace {

double mean_over(const DistanceMatrix& d, std::size_t i,
                 const std::vector<std::size_t>& set) {
  double s = 0.0;
  for (std::size_t j : set) s += d(i, j);
  return s / static_cast<double>(set.size());
}

}  // namespace

TwoClusterStats two_cluster_stats(const DistanceMatrix& d, const Partition& p) {
  if (p.num_clusters() != 2) throw InputError("certificates need K = 2");
  if (p.size() != d.size()) throw InputError("partition and distances disagree on n");
  TwoClusterStats s;
  auto a = p.members(0);
  auto b = p.members(1);
  if (b.size() < a.size() || (b.size() == a.size() && b.front() < a.front()))
    std::swap(a, b);
  s.members = {std::move(a), std::move(b)};
  const double n1 = static_cast<double>(s.members[0].size());
  const double n2 = static_cast<double>(s.members[1].size());
  s.r1 = 2.0 * n1 / (n1 + n2);
  s.r2 = 2.0 * n2 / (n1 + n2);

  const std::size_t n = d.size();
  s.d_in.assign(n, 0.0);
  s.d_out.assign(n, 0.0);
  for (int l = 0; l < 2; ++l) {
    for (std::size_t i : s.members[l]) {
      s.d_in[i] = mean_over(d, i, s.members[l]);
      s.d_out[i] = mean_over(d, i, s.members[1 - l]);
    }
  }

  double max1 = -std::numeric_limits<double>::infinity();
  double avg1 = 0.0;
  for (std::size_t i : s.members[0]) {
    max1 = std::max(max1, s.d_in[i]);
    avg1 += s.d_in[i];
  }
  avg1 /= n1;
  double min2 = std::numeric_limits<double>::infinity();
  double avg2 = 0.0;
  for (std::size_t i : s.members[1]) {
    min2 = std::min(min2, s.d_in[i]);
    avg2 += s.d_in[i];
  }
  avg2 /= n2;
  const double q = s.r1 / s.r2;
  s.eta = 0.5 * s.r2 *
          ((1.0 - q) * max1 + (1.0 - 1.0 / q) * min2 + q * avg1 + avg2 / q);
  return s;
}

std::size_t PairValues::num_pairs() const {
  std::size_t total = 0;
  for (const auto& m : members) total += m.size() * (m.size() - 1) / 2;
  return total;
}

PairValues proximity_slacks(const DistanceMatrix& d, const TwoClusterStats& s) {
  PairValues out;
  out.members = s.members;
  for (int l = 0; l < 2; ++l) {
    const auto& own = s.members[l];
    const auto& other = s.members[1 - l];
    const double r = l == 0 ? s.r2 : s.r1;
    const double eta_l = l == 0 ? s.eta : (s.r1 / s.r2) * s.eta;
    const std::size_t a = own.size();
    const std::size_t b = other.size();
    out.values[l] = SymMatrix(a, 0.0);

    // r * d(own[x], other[y]), gathered so the inner loop is contiguous.
    std::vector<double> cross(a * b);
    for (std::size_t x = 0; x < a; ++x)
      for (std::size_t y = 0; y < b; ++y)
        cross[x * b + y] = r * d(own[x], other[y]);

    SymMatrix& vals = out.values[l];
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t xx = 0; xx < static_cast<std::int64_t>(a); ++xx) {
      const auto x = static_cast<std::size_t>(xx);
      const double* ci = cross.data() + x * b;
      const double din_i = s.d_in[own[x]];
      for (std::size_t y = x + 1; y < a; ++y) {
        const double* cj = cross.data() + y * b;
        const double din_j = s.d_in[own[y]];
        double acc = 0.0;
        for (std::size_t t = 0; t < b; ++t)
          acc += std::min(ci[t] + din_j, cj[t] + din_i);
        vals(x, y) = acc / static_cast<double>(b) - d(own[x], own[y]) - eta_l;
      }
    }
  }
  return out;
}

PairValues gamma_values(const DistanceMatrix& d, const TwoClusterStats& s) {
  PairValues g = proximity_slacks(d, s);
  for (auto& v : g.values)
    for (double& e : v.packed()) e *= 2.0;
  return g;
}

PairValues gamma_values(const DistanceMatrix& d, const Partition& p) {
  return gamma_values(d, two_cluster_stats(d, p));
}

std::string_view verdict_name(ProximityVerdict v) {
  switch (v) {
    case ProximityVerdict::kHoldsStrict: return "holds_strict";
    case ProximityVerdict::kHolds: return "holds";
    case ProximityVerdict::kFails: return "fails";
  }
  return "unknown";
}

ProximityReport proximity_check(const DistanceMatrix& d, const Partition& p) {
  const auto stats = two_cluster_stats(d, p);
  const auto slack = proximity_slacks(d, stats);
  ProximityReport rep;
  const std::size_t n = d.size();
  double worst = std::numeric_limits<double>::infinity();
  for (int l = 0; l < 2; ++l) {
    rep.min_slack[l] = std::numeric_limits<double>::infinity();
    rep.worst_pair[l] = {n, n};
    const auto& mem = slack.members[l];
    for (std::size_t a = 0; a < mem.size(); ++a)
      for (std::size_t b = a + 1; b < mem.size(); ++b)
        if (slack(l, a, b) < rep.min_slack[l]) {
          rep.min_slack[l] = slack(l, a, b);
          rep.worst_pair[l] = {mem[a], mem[b]};
        }
    worst = std::min(worst, rep.min_slack[l]);
  }
  if (worst > kStrictMargin) {
    rep.verdict = ProximityVerdict::kHoldsStrict;
  } else if (worst >= 0.0) {
    rep.verdict = ProximityVerdict::kHolds;
  } else {
    rep.verdict = ProximityVerdict::kFails;
  }
  return rep;
}

std::size_t TripleKeyHash::operator()(const TripleKey& t) const noexcept {
  std::uint64_t h = splitmix64(t.k);
  h = splitmix64(h ^ t.i);
  return static_cast<std::size_t>(splitmix64(h ^ t.j));
}

CertifyState certify(PairValues gamma, CertifyOrder order) {
  CertifyState st;
  for (int l = 0; l < 2; ++l) {
    if (gamma.values[l].size() != gamma.members[l].size())
      throw InputError("gamma does not match its cluster sizes");
  }
  st.r_bar = gamma;
  st.gamma = std::move(gamma);

  struct Pending {
    int l;
    std::uint32_t a, b;
    double r;
  };
  std::vector<Pending> pending;
  for (int l = 0; l < 2; ++l) {
    const auto size = static_cast<std::uint32_t>(st.gamma.members[l].size());
    for (std::uint32_t a = 0; a < size; ++a)
      for (std::uint32_t b = a + 1; b < size; ++b)
        if (st.r_bar(l, a, b) < 0.0) pending.push_back({l, a, b, st.r_bar(l, a, b)});
  }
  // Entries of the pending set never change while another one is repaired,
  // so one sort fixes the whole selection order.
  if (order == CertifyOrder::kMostNegative) {
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Pending& x, const Pending& y) { return x.r < y.r; });
  }

  for (const auto& pr : pending) {
    const int l = pr.l;
    const std::uint32_t i = pr.a;
    const std::uint32_t j = pr.b;
    auto& r = st.r_bar.values[l];
    auto& lam = st.lambda[l];
    const auto size = static_cast<std::uint32_t>(st.gamma.members[l].size());
    bool repaired = false;
    for (std::uint32_t k = 0; k < size; ++k) {
      if (k == i || k == j) continue;
      const double w = std::min({-r(i, j), r(i, k), r(j, k)});
      if (w <= 0.0) continue;
      r(i, k) -= w;
      r(j, k) -= w;
      r(i, j) += w;
      lam[{k, i, j}] += w;
      ++st.repairs;
      if (r(i, j) >= 0.0) {
        repaired = true;
        break;
      }
    }
    if (!repaired) {
      st.success = false;
      st.failed_cluster = l;
      st.failed_pair = {st.gamma.members[l][i], st.gamma.members[l][j]};
      st.deficit = -r(i, j);
      return st;
    }
  }
  st.success = true;
  return st;
}

PairValues recompute_residuals(const CertifyState& state) {
  PairValues r = state.gamma;
  for (int l = 0; l < 2; ++l) {
    for (const auto& [key, w] : state.lambda[l]) {
      r(l, key.i, key.j) += w;
      r(l, key.k, key.i) -= w;
      r(l, key.k, key.j) -= w;
    }
  }
  return r;
}

}  // namespace kmlp
