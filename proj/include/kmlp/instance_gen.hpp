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

// Seeded synthetic inputs with a planted two-cluster structure, plus the
// five-point configuration on which the LP relaxation is provably not tight.

#ifndef KMLP_INSTANCE_GEN_HPP
#define KMLP_INSTANCE_GEN_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "kmlp/core_types.hpp"

namespace kmlp {

enum class Model { kSphere, kBall, kFivePoint, kFiveBall };

std::string_view model_name(Model model);
/// Accepts "ssm", "sbm", "five-point"/"five_point", "five-ball"/"five_ball".
Model parse_model(std::string_view name);

struct GenSpec {
  Model model = Model::kSphere;
  std::size_t n = 100;   // total points (ssm/sbm)
  std::size_t m = 2;     // dimension
  double delta = 3.0;    // distance between the two centers (ssm/sbm)
  double r1 = 1.0;       // 2|G1|/n, in (0, 1] (ssm/sbm)
  double radius = 0.0;   // ball radius (five_ball)
  std::size_t n_prime = 1;  // points per ball (five_ball)
  std::uint64_t seed = 0;
};

struct Instance {
  PointSet points;
  Partition planted;
};

/// Throws InputError when the spec is inconsistent.
void validate(const GenSpec& spec);

/// ssm: |G1| = r1 n/2 points uniform on the unit sphere at the origin and
/// |G2| = (2 - r1) n/2 on the unit sphere at delta e1. sbm: the same with
/// points uniform in the closed unit balls. five_point: the five fixed points
/// (zero-padded to m). five_ball: n' uniform points in the radius-r ball
/// around each of the five points, ball p occupying rows p n' .. (p+1) n' - 1.
/// Planted partitions put G1 (resp. balls 1 and 4) in cluster 0.
Instance generate(const GenSpec& spec);

/// The five fixed points in R^3.
PointSet five_points();

/// The 5n' x 5n' feasible non-integral LP point built from the five-point
/// block values 6, 5, 1, 3, 0 (over 14 n'); equals the 5 x 5 matrix for n'=1.
SymMatrix reference_nontight_matrix(std::size_t n_prime);

/// 1 + sqrt(1 + 2 / r1) for r1 in (0, 1].
double recovery_threshold(double r1);

}  // namespace kmlp

#endif  // KMLP_INSTANCE_GEN_HPP
