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
#include <set>

#include "kmlp/instance_gen.hpp"
#include "kmlp/lp_model.hpp"

using namespace kmlp;

namespace {

using Cut = std::pair<std::uint32_t, std::vector<std::uint32_t>>;

std::set<Cut> as_set(const CutPool& pool) {
  std::set<Cut> out;
  for (const auto& c : pool.cuts()) out.emplace(c.i, c.S);
  return out;
}

}  // namespace

TEST_CASE("facet inequality validation") {
  CHECK_THROWS_AS(FacetInequality(0, {1}), InputError);
  CHECK_THROWS_AS(FacetInequality(0, {1, 1}), InputError);
  CHECK_THROWS_AS(FacetInequality(1, {1, 2}), InputError);
  const FacetInequality c(0, {3, 1});
  CHECK(c.S == std::vector<std::uint32_t>{1, 3});
  CutPool pool;
  CHECK(pool.insert(c));
  CHECK_FALSE(pool.insert(FacetInequality(0, {1, 3})));
  CHECK(pool.size() == 1);
}

TEST_CASE("model size with an empty pool") {
  const auto d = squared_distances(five_points());
  const auto lp = build(d, 2, CutPool{});
  lp.check();
  CHECK(lp.num_cols() == 15);
  CHECK(lp.num_rows() == 6);
  CHECK(lp.num_equalities == 6);
  CHECK(lp.rhs[0] == 2.0);
  CHECK(lp.a.nnz() == 5 + 5 * 5);
  CHECK_THROWS_AS(build(d, 1, CutPool{}), InputError);
  CHECK_THROWS_AS(build(d, 6, CutPool{}), InputError);
}

TEST_CASE("objective agrees with the matrix objective") {
  const auto d = squared_distances(five_points());
  const auto lp = build(d, 2, all_cuts(5, 2));
  CHECK(lp.num_rows() == 6 + 30);
  const auto x = reference_nontight_matrix(1);
  CHECK(lp.objective(x.packed()) == doctest::Approx(lp_objective(x, d)).epsilon(1e-14));
  CHECK(lp.objective(x.packed()) == doctest::Approx(54.0 / 28.0).epsilon(1e-14));
}

TEST_CASE("the reference matrix satisfies every size-2 cut") {
  const auto x = reference_nontight_matrix(1);
  const auto d = squared_distances(five_points());
  const auto lp = build(d, 2, all_cuts(5, 2));
  std::vector<double> ax(lp.num_rows());
  lp.a.multiply(x.packed(), ax);
  for (std::size_t r = 0; r < lp.num_equalities; ++r)
    CHECK(ax[r] == doctest::Approx(lp.rhs[r]).epsilon(1e-14));
  for (std::size_t r = lp.num_equalities; r < lp.num_rows(); ++r)
    CHECK(ax[r] <= 1e-14);
  const auto pool = all_cuts(5, 2);
  for (std::size_t r = 0; r < pool.size(); ++r)
    CHECK(ax[lp.num_equalities + r] == doctest::Approx(violation(x, pool[r])).epsilon(1e-14));
}

TEST_CASE("violation of a single cut") {
  SymMatrix x(3);
  x(0, 0) = 0.2;
  x(0, 1) = 0.5;
  x(0, 2) = 0.5;
  x(1, 2) = 0.2;
  CHECK(violation(x, FacetInequality(0, {1, 2})) == doctest::Approx(0.6));
  CHECK(violation(partition_matrix(Partition(1, {0, 0, 0})),
                  FacetInequality(0, {1, 2})) == doctest::Approx(0.0));
}

TEST_CASE("cut counts") {
  // n * sum_{s=2..t} C(n-1, s) from a Python enumeration.
  CHECK(count_cuts(5, 2) == 30.0);
  CHECK(count_cuts(6, 3) == 120.0);
  CHECK(count_cuts(10, 4) == 2460.0);
  CHECK(count_cuts(40, 2) == 29640.0);
  CHECK(count_cuts(3, 5) == 3.0);
  CHECK(count_cuts(2, 2) == 0.0);
  CHECK(static_cast<double>(all_cuts(6, 3).size()) == count_cuts(6, 3));
  std::size_t visited = 0;
  for_each_cut(SymMatrix(10), 4,
               [&](std::uint32_t, std::span<const std::uint32_t>, double) {
                 ++visited;
               });
  CHECK(static_cast<double>(visited) == count_cuts(10, 4));
}

TEST_CASE("enumerated values match direct evaluation") {
  const auto x = reference_nontight_matrix(2);
  for_each_cut(x, 3, [&](std::uint32_t i, std::span<const std::uint32_t> s,
                         double w) {
    const FacetInequality c(i, std::vector<std::uint32_t>(s.begin(), s.end()));
    CHECK(w == doctest::Approx(violation(x, c)).epsilon(1e-12));
  });
}

TEST_CASE("active cuts") {
  // Identity: every w equals -1 for |S| = 2.
  SymMatrix eye(4);
  for (std::size_t i = 0; i < 4; ++i) eye(i, i) = 1.0;
  CHECK(active_cuts(eye, 2, kActivityTol, 100, 0).empty());

  const auto one = partition_matrix(Partition(1, {0, 0, 0}));
  CHECK(active_cuts(one, 2, kActivityTol, 100, 0).size() == 3);

  // Planted five-point partition: 21 of the 30 size-2 cuts are tight
  // (enumerated independently in Python).
  const auto x = partition_matrix(Partition(2, {0, 1, 1, 0, 1}));
  const std::set<Cut> expect = {
      {0, {1, 3}}, {0, {2, 3}}, {0, {3, 4}}, {1, {0, 2}}, {1, {0, 4}},
      {1, {2, 3}}, {1, {2, 4}}, {1, {3, 4}}, {2, {0, 1}}, {2, {0, 4}},
      {2, {1, 3}}, {2, {1, 4}}, {2, {3, 4}}, {3, {0, 1}}, {3, {0, 2}},
      {3, {0, 4}}, {4, {0, 1}}, {4, {0, 2}}, {4, {1, 2}}, {4, {1, 3}},
      {4, {2, 3}}};
  const auto pool = active_cuts(x, 2, kActivityTol, 1000, 0);
  CHECK(as_set(pool) == expect);

  const auto capped = active_cuts(x, 2, kActivityTol, 10, 3);
  CHECK(capped.size() == 10);
  for (const auto& c : as_set(capped)) CHECK(expect.contains(c));
  CHECK(as_set(capped) == as_set(active_cuts(x, 2, kActivityTol, 10, 3)));
}

TEST_CASE("pool retain and activity") {
  auto pool = all_cuts(5, 2);
  pool.record_activity(reference_nontight_matrix(1));
  for (std::size_t r = 0; r < pool.size(); ++r) CHECK(pool.activity()[r] <= 1e-14);
  const auto before = pool.cuts();
  const auto kept = pool.retain([](std::size_t r) { return r % 3 == 0; });
  CHECK(kept.size() == 10);
  CHECK(pool.size() == 10);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    CHECK(pool[r] == before[kept[r]]);
  }
  CHECK_FALSE(pool.contains(before[1]));
  CHECK(pool.insert(before[1]));
}

TEST_CASE("appending cuts to a built model") {
  const auto d = squared_distances(five_points());
  auto lp = build(d, 2, CutPool{});
  const std::vector<FacetInequality> cuts = {FacetInequality(2, {0, 4, 1})};
  append_cuts(lp, cuts);
  CHECK(lp.num_inequalities() == 1);
  // -X_22 + X_20 + X_21 + X_24 - X_01 - X_04 - X_14
  CHECK(lp.a.row_ptr.back() - lp.a.row_ptr[lp.num_rows() - 1] == 7);
  const auto x = reference_nontight_matrix(1);
  CHECK(lp.a.row_dot(lp.num_rows() - 1, x.packed()) ==
        doctest::Approx(violation(x, cuts[0])).epsilon(1e-14));
}
