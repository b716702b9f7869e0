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

#include <doctest.h>

#include <algorithm>
#include <map>

#include "kmlp/instance_gen.hpp"
#include "kmlp/rng.hpp"
#include "kmlp/separation.hpp"

using namespace kmlp;

namespace {

using Key = std::pair<std::uint32_t, std::vector<std::uint32_t>>;

// Every subset by bitmask, violation written out term by term.
std::map<Key, double> brute_violated(const SymMatrix& x, std::size_t t,
                                     double eps) {
  const std::size_t n = x.size();
  std::map<Key, double> out;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (mask & (1u << i)) continue;
      std::vector<std::uint32_t> s;
      for (std::uint32_t j = 0; j < n; ++j)
        if (mask & (1u << j)) s.push_back(j);
      if (s.size() < 2 || s.size() > t) continue;
      double w = -x(i, i);
      for (auto j : s) w += x(i, j);
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) w -= x(s[a], s[b]);
      if (w > eps) out[{i, s}] = w;
    }
  }
  return out;
}

SymMatrix random_matrix(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 5 + rng.below(5);
  const std::size_t k = 2 + rng.below(2);
  SymMatrix x(n);
  const std::size_t parts = 1 + rng.below(3);
  for (std::size_t p = 0; p < parts; ++p) {
    std::vector<int> a(n);
    for (std::size_t i = 0; i < n; ++i)
      a[i] = i < k ? static_cast<int>(i) : static_cast<int>(rng.below(k));
    const auto px = partition_matrix(Partition(k, a));
    for (std::size_t q = 0; q < px.packed().size(); ++q)
      x.packed()[q] += px.packed()[q] / static_cast<double>(parts);
  }
  if (seed % 2 == 0) {
    for (double& v : x.packed()) v = std::max(0.0, v + 0.15 * (rng.uniform() - 0.5));
  }
  return x;
}

}  // namespace

TEST_CASE("partition matrices have no violated cuts") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(s);
    const std::size_t n = 6 + s;
    std::vector<int> a(n);
    for (std::size_t i = 0; i < n; ++i)
      a[i] = i < 3 ? static_cast<int>(i) : static_cast<int>(rng.below(3));
    const auto x = partition_matrix(Partition(3, a));
    CHECK(separate_greedy(x, 3).cuts.empty());
    CHECK(separate_exhaustive(x, 3).cuts.empty());
  }
  const auto ref = reference_nontight_matrix(1);
  CHECK(separate_exhaustive(ref, 2).cuts.empty());
  CHECK(separate_greedy(ref, 2).cuts.empty());
}

TEST_CASE("three-point example") {
  SymMatrix x(3);
  x(0, 0) = 0.2;
  x(0, 1) = 0.5;
  x(0, 2) = 0.5;
  x(1, 2) = 0.2;
  for (const auto& rep : {separate_greedy(x, 2), separate_exhaustive(x, 2)}) {
    REQUIRE(rep.cuts.size() == 3);
    CHECK(rep.cuts[0].cut == FacetInequality(0, {1, 2}));
    CHECK(rep.cuts[0].violation == doctest::Approx(0.6));
    CHECK(rep.cuts[1].cut == FacetInequality(1, {0, 2}));
    CHECK(rep.cuts[1].violation == doctest::Approx(0.2));
    CHECK(rep.cuts[2].cut == FacetInequality(2, {0, 1}));
  }
}

TEST_CASE("exhaustive search agrees with subset enumeration") {
  std::size_t with_cuts = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto x = random_matrix(s);
    const std::size_t t = 2 + s % 3;
    const auto expect = brute_violated(x, t, kViolationTol);
    const auto ex = separate_exhaustive(x, t);
    CHECK(ex.exhaustive);
    REQUIRE(ex.cuts.size() == expect.size());
    for (const auto& v : ex.cuts) {
      const auto it = expect.find({v.cut.i, v.cut.S});
      REQUIRE(it != expect.end());
      CHECK(v.violation == doctest::Approx(it->second).epsilon(1e-12));
    }
    for (std::size_t r = 1; r < ex.cuts.size(); ++r)
      CHECK(ex.cuts[r - 1].violation >= ex.cuts[r].violation);

    const auto gr = separate_greedy(x, t);
    CHECK_FALSE(gr.exhaustive);
    for (const auto& v : gr.cuts) {
      CHECK(v.cut.S.size() <= t);
      const auto it = expect.find({v.cut.i, v.cut.S});
      REQUIRE(it != expect.end());
      CHECK(v.violation == doctest::Approx(it->second).epsilon(1e-12));
    }
    // Greedy starts from every pair, so it always finds the most violated
    // size-2 cut.
    double best2 = 0.0;
    for (const auto& [key, w] : expect)
      if (key.second.size() == 2) best2 = std::max(best2, w);
    if (best2 > 0.0) {
      REQUIRE_FALSE(gr.cuts.empty());
      CHECK(gr.cuts.front().violation >= best2 - 1e-12);
    }
    with_cuts += expect.empty() ? 0 : 1;
  }
  CHECK(with_cuts >= 50);
  CHECK(with_cuts <= 150);
}

TEST_CASE("deterministic output and truncation") {
  const auto x = random_matrix(4);
  const auto a = separate_greedy(x, 3);
  const auto b = separate_greedy(x, 3);
  REQUIRE(a.cuts.size() == b.cuts.size());
  for (std::size_t r = 0; r < a.cuts.size(); ++r) CHECK(a.cuts[r].cut == b.cuts[r].cut);

  const auto full = separate_exhaustive(x, 3);
  REQUIRE(full.cuts.size() > 2);
  const auto capped = separate_exhaustive(x, 3, kViolationTol, 2);
  CHECK(capped.truncated);
  CHECK_FALSE(full.truncated);
  REQUIRE(capped.cuts.size() == 2);
  CHECK(capped.cuts[0].cut == full.cuts[0].cut);
  CHECK(capped.cuts[1].cut == full.cuts[1].cut);
}

TEST_CASE("argument checks") {
  const auto x = random_matrix(2);
  CHECK_THROWS_AS(separate_greedy(x, 1), InputError);
  CHECK_THROWS_AS(separate_exhaustive(x, 3, kViolationTol, 10, 5.0), InputError);
  std::vector<ViolatedCut> v = {{FacetInequality(2, {0, 1}), 0.5},
                                {FacetInequality(1, {0, 3}), 0.5},
                                {FacetInequality(0, {1, 2}), 0.7}};
  sort_most_violated(v);
  CHECK(v[0].cut.i == 0);
  CHECK(v[1].cut.i == 1);
  CHECK(v[2].cut.i == 2);
}
