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

#include "kmlp/separation.hpp"

#include <algorithm>
#include <string>

namespace kmlp {

void sort_most_violated(std::vector<ViolatedCut>& cuts) {
  std::sort(cuts.begin(), cuts.end(),
            [](const ViolatedCut& a, const ViolatedCut& b) {
              if (a.violation != b.violation) return a.violation > b.violation;
              if (a.cut.i != b.cut.i) return a.cut.i < b.cut.i;
              return a.cut.S < b.cut.S;
            });
}

SeparationReport separate_greedy(const SymMatrix& x, std::size_t t_max,
                                 double eps_vio) {
  if (t_max < 2) throw InputError("separation needs t_max >= 2");
  const auto n = static_cast<std::uint32_t>(x.size());
  std::vector<std::vector<ViolatedCut>> per_apex(n);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
    const auto i = static_cast<std::uint32_t>(ii);
    auto& found = per_apex[i];
    std::vector<std::uint32_t> set;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i) continue;
      set.assign(1, j);
      double w = x(i, j) - x(i, i);
      std::uint32_t last = j;
      while (set.size() < t_max) {
        std::uint32_t best_k = n;
        double best_gain = 0.0;
        for (std::uint32_t k = last + 1; k < n; ++k) {
          if (k == i) continue;
          double gain = x(i, k);
          for (std::uint32_t l : set) gain -= x(l, k);
          if (best_k == n || gain > best_gain) {
            best_k = k;
            best_gain = gain;
          }
        }
        if (best_k == n) break;
        set.push_back(best_k);
        last = best_k;
        w += best_gain;
        if (w > eps_vio) {
          FacetInequality cut(i, set);
          const double exact = violation(x, cut);
          if (exact > eps_vio) found.push_back({std::move(cut), exact});
        }
      }
    }
  }

  SeparationReport report;
  for (auto& v : per_apex)
    for (auto& c : v) report.cuts.push_back(std::move(c));
  sort_most_violated(report.cuts);
  return report;
}

SeparationReport separate_exhaustive(const SymMatrix& x, std::size_t t_max,
                                     double eps_vio, std::size_t cap,
                                     double budget) {
  if (t_max < 2) throw InputError("separation needs t_max >= 2");
  const std::size_t n = x.size();
  if (count_cuts(n, t_max) > budget) {
    throw InputError("exhaustive separation over budget (n=" +
                     std::to_string(n) + ", t=" + std::to_string(t_max) + ")");
  }
  SeparationReport report;
  report.exhaustive = true;
  for_each_cut(x, t_max,
               [&](std::uint32_t i, std::span<const std::uint32_t> s, double w) {
                 if (w <= eps_vio) return;
                 FacetInequality cut(i, {s.begin(), s.end()});
                 const double exact = violation(x, cut);
                 if (exact > eps_vio)
                   report.cuts.push_back({std::move(cut), exact});
               });
  sort_most_violated(report.cuts);
  if (report.cuts.size() > cap) {
    report.cuts.resize(cap);
    report.truncated = true;
  }
  return report;
}

}  // namespace kmlp
