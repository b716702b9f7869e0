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

#include <cmath>
#include <numbers>

#include "kmlp/cutplane.hpp"
#include "kmlp/folp.hpp"
#include "kmlp/instance_gen.hpp"
#include "kmlp/rng.hpp"

using namespace kmlp;

namespace {

LpStandardForm tiny(std::vector<double> c,
                    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows,
                    std::vector<double> rhs, std::size_t num_eq) {
  LpStandardForm lp;
  lp.c = std::move(c);
  lp.a.cols = lp.c.size();
  for (auto& r : rows) lp.a.append_row(std::move(r));
  lp.rhs = std::move(rhs);
  lp.num_equalities = num_eq;
  lp.lower.assign(lp.c.size(), 0.0);
  lp.upper.assign(lp.c.size(), 1.0);
  lp.check();
  return lp;
}

PointSet cube() {
  std::vector<double> c;
  for (int v = 0; v < 8; ++v)
    for (int b = 2; b >= 0; --b) c.push_back((v >> b) & 1);
  return PointSet(8, 3, c);
}

PointSet pentagon() {
  std::vector<double> c;
  for (int v = 0; v < 5; ++v) {
    const double a = 2.0 * std::numbers::pi * v / 5.0;
    c.push_back(std::cos(a));
    c.push_back(std::sin(a));
  }
  return PointSet(5, 2, c);
}

PointSet eight_points() {
  return PointSet(8, 2,
                  {0, 0, 1, 0.2, 0.3, 1.1, 2.9, 3.1, 3.4, 2.2, 4.0, 3.5, 1.8,
                   1.9, 0.6, 2.7});
}

}  // namespace

TEST_CASE("small hand-made programs") {
  // min x0 + 2 x1  s.t. x0 + x1 = 1
  auto lp = tiny({1, 2}, {{{0, 1.0}, {1, 1.0}}}, {1.0}, 1);
  auto sol = solve(lp);
  CHECK(sol.status == LpStatus::kOptimal);
  CHECK(sol.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(safe_lower_bound(lp, sol) <= 1.0 + 1e-12);
  CHECK(safe_lower_bound(lp, sol) == doctest::Approx(1.0).epsilon(1e-6));

  // min -x0 - x1  s.t. x0 + x1 <= 1.5
  lp = tiny({-1, -1}, {{{0, 1.0}, {1, 1.0}}}, {1.5}, 0);
  sol = solve(lp);
  CHECK(sol.status == LpStatus::kOptimal);
  CHECK(sol.primal_objective == doctest::Approx(-1.5).epsilon(1e-7));
  CHECK(sol.z.size() == 1);
  CHECK(sol.z[0] <= 0.0);
  CHECK(safe_lower_bound(lp, sol) <= -1.5 + 1e-12);
  CHECK(sol.row_duals().size() == 1);

  // Bounds only: every coefficient picks its better bound.
  lp = tiny({3, -2, 0}, {}, {}, 0);
  sol = solve(lp);
  CHECK(sol.primal_objective == doctest::Approx(-2.0));
  CHECK(safe_lower_bound(lp, sol) == doctest::Approx(-2.0));
}

TEST_CASE("five-point relaxation value") {
  const auto d = squared_distances(five_points());
  const auto r = solve_full_lp(d, 2, 2);
  CHECK(r.solution.status == LpStatus::kOptimal);
  CHECK(r.solution.primal_objective == doctest::Approx(54.0 / 28.0).epsilon(1e-6));
  CHECK(r.safe_bound <= 54.0 / 28.0 + 1e-9);
  CHECK(r.safe_bound >= 54.0 / 28.0 - 1e-6);
  CHECK_FALSE(r.tight);
  CHECK(r.num_cuts == 30);
}

TEST_CASE("relaxation values frozen from an independent simplex solve") {
  const auto d8 = squared_distances(eight_points());
  CHECK(solve_full_lp(d8, 2, 2).safe_bound == doctest::Approx(17.266666666667).epsilon(1e-7));
  CHECK(solve_full_lp(d8, 3, 2).safe_bound == doctest::Approx(7.493333333333).epsilon(1e-7));
  CHECK(solve_full_lp(d8, 3, 3).safe_bound == doctest::Approx(7.493333333333).epsilon(1e-7));
  CHECK(solve_full_lp(d8, 2, 2).tight);

  const auto dc = squared_distances(cube());
  const auto c2 = solve_full_lp(dc, 3, 2);
  const auto c3 = solve_full_lp(dc, 3, 3);
  CHECK(c2.safe_bound == doctest::Approx(16.0 / 3.0).epsilon(1e-7));
  CHECK(c3.safe_bound == doctest::Approx(6.0).epsilon(1e-7));
  CHECK_FALSE(c2.tight);
  // Several optimal partitions: the optimum face is not a single vertex.
  CHECK(c3.safe_bound == doctest::Approx(kmeans_bruteforce(cube(), 3).cost).epsilon(1e-7));

  const auto dp = squared_distances(pentagon());
  CHECK(solve_full_lp(dp, 3, 2).safe_bound == doctest::Approx(2.7639320225).epsilon(1e-8));
}

TEST_CASE("two well separated pairs give an integral solution") {
  const PointSet p(4, 1, {0, 0.1, 10, 10.2});
  const auto r = solve_full_lp(squared_distances(p), 2, 2);
  CHECK(r.tight);
  CHECK(extract_partition(r.x).same_clustering(Partition(2, {0, 0, 1, 1})));
  CHECK(r.safe_bound == doctest::Approx(0.05).epsilon(1e-7));
}

TEST_CASE("safe bound stays below the optimum after an early stop") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    GenSpec g;
    g.model = s % 2 ? Model::kBall : Model::kSphere;
    g.n = 10;
    g.m = 2;
    g.delta = 1.0 + 0.05 * static_cast<double>(s);
    g.seed = s;
    const auto d = squared_distances(generate(g).points);
    const auto lp = build(d, 2, all_cuts(10, 2));
    LpSolveOptions loose;
    loose.tol = 1e-2;
    const auto rough = solve(lp, loose);
    const auto fine = solve(lp);
    REQUIRE(fine.status == LpStatus::kOptimal);
    const double opt = fine.primal_objective;
    CHECK(safe_lower_bound(lp, rough) <= opt + 1e-7 * (1.0 + std::abs(opt)));
    CHECK(safe_lower_bound(lp, fine) <= opt + 1e-7 * (1.0 + std::abs(opt)));
    CHECK(safe_lower_bound(lp, fine) >= opt - 1e-5 * (1.0 + std::abs(opt)));
  }
}

TEST_CASE("warm start reproduces the optimum") {
  const auto d = squared_distances(five_points());
  const auto lp = build(d, 2, all_cuts(5, 2));
  const auto cold = solve(lp);
  LpSolveOptions warm;
  warm.warm_x = cold.x;
  warm.warm_y = cold.row_duals();
  const auto again = solve(lp, warm);
  CHECK(again.status == LpStatus::kOptimal);
  CHECK(again.iterations <= cold.iterations);
  CHECK(again.primal_objective == doctest::Approx(54.0 / 28.0).epsilon(1e-6));
  LpSolveOptions bad;
  bad.warm_x = {1.0};
  CHECK_THROWS_AS(solve(lp, bad), InputError);
}

TEST_CASE("operator norm estimate") {
  CsrMatrix eye;
  eye.cols = 4;
  for (std::uint32_t i = 0; i < 4; ++i) eye.append_row({{i, 1.0}});
  CHECK(operator_norm_estimate(eye) == doctest::Approx(1.0).epsilon(1e-6));

  CsrMatrix ones;
  ones.cols = 7;
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::uint32_t j = 0; j < 7; ++j) row.emplace_back(j, 1.0);
  ones.append_row(row);
  CHECK(operator_norm_estimate(ones) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-6));

  // Largest singular values from numpy.linalg.svd of the dense matrices.
  const auto lp5 = build(squared_distances(five_points()), 2, all_cuts(5, 2));
  CHECK(lp5.num_rows() == 36);
  CHECK(operator_norm_estimate(lp5) == doctest::Approx(3.816774078044).epsilon(1e-6));
  const auto lp6 = build(DistanceMatrix(6, std::vector<double>(36, 0.0)), 2, all_cuts(6, 3));
  CHECK(lp6.num_rows() == 127);
  CHECK(operator_norm_estimate(lp6) == doctest::Approx(8.078982070361).epsilon(1e-6));
}
