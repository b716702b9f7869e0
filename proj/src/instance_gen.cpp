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

#include "kmlp/instance_gen.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "kmlp/rng.hpp"

namespace kmlp {
namespace {

constexpr std::size_t kFivePointDim = 3;

std::array<std::array<double, 3>, 5> five_point_coords() {
  const double s3 = std::sqrt(3.0);
  return {{{0.0, s3 / 3.0, 0.0},
           {0.5, -s3 / 6.0, 0.0},
           {-0.5, -s3 / 6.0, 0.0},
           {0.0, 0.0, 0.5},
           {0.0, 0.0, -0.5}}};
}

// Cluster of each of the five points in the optimal 2-clustering.
constexpr std::array<int, 5> kFivePointLabels = {0, 1, 1, 0, 1};

// Uniform direction on the unit sphere in R^m.
void sample_direction(Rng& rng, std::size_t m, double* out) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      out[a] = rng.normal();
      norm2 += out[a] * out[a];
    }
  } while (norm2 < 1e-300);
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t a = 0; a < m; ++a) out[a] *= inv;
}

bool is_integral(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

}  // namespace

std::string_view model_name(Model model) {
  switch (model) {
    case Model::kSphere: return "ssm";
    case Model::kBall: return "sbm";
    case Model::kFivePoint: return "five_point";
    case Model::kFiveBall: return "five_ball";
  }
  return "unknown";
}

Model parse_model(std::string_view name) {
  if (name == "ssm") return Model::kSphere;
  if (name == "sbm") return Model::kBall;
  if (name == "five-point" || name == "five_point") return Model::kFivePoint;
  if (name == "five-ball" || name == "five_ball") return Model::kFiveBall;
  throw InputError("unknown model '" + std::string(name) + "'");
}

void validate(const GenSpec& spec) {
  switch (spec.model) {
    case Model::kSphere:
    case Model::kBall: {
      if (spec.m < 1) throw InputError("dimension must be >= 1");
      if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta))
        throw InputError("delta must be finite and >= 0");
      if (!(spec.r1 > 0.0 && spec.r1 <= 1.0))
        throw InputError("r1 must lie in (0, 1]");
      const double g1 = spec.r1 * static_cast<double>(spec.n) / 2.0;
      const double g2 = (2.0 - spec.r1) * static_cast<double>(spec.n) / 2.0;
      if (!is_integral(g1) || !is_integral(g2))
        throw InputError("r1 * n / 2 must be an integer cluster size");
      if (std::round(g1) < 1.0) throw InputError("cluster sizes must be >= 1");
      break;
    }
    case Model::kFivePoint:
    case Model::kFiveBall:
      if (spec.m < kFivePointDim)
        throw InputError("five-point and five-ball inputs need m >= 3");
      if (spec.model == Model::kFiveBall) {
        if (!(spec.radius >= 0.0) || !std::isfinite(spec.radius))
          throw InputError("radius must be finite and >= 0");
        if (spec.n_prime < 1) throw InputError("n' must be >= 1");
      }
      break;
  }
}

PointSet five_points() {
  const auto c = five_point_coords();
  std::vector<double> coords;
  for (const auto& p : c) coords.insert(coords.end(), p.begin(), p.end());
  return PointSet(5, kFivePointDim, std::move(coords));
}

Instance generate(const GenSpec& spec) {
  validate(spec);
  const std::size_t m = spec.m;
  Rng rng(spec.seed);
  std::vector<double> coords;
  std::vector<int> labels;

  switch (spec.model) {
    case Model::kSphere:
    case Model::kBall: {
      const auto g1 = static_cast<std::size_t>(
          std::llround(spec.r1 * static_cast<double>(spec.n) / 2.0));
      const std::size_t n = spec.n;
      coords.assign(n * m, 0.0);
      labels.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        double* x = &coords[i * m];
        sample_direction(rng, m, x);
        if (spec.model == Model::kBall) {
          const double scale =
              std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
          for (std::size_t a = 0; a < m; ++a) x[a] *= scale;
        }
        if (i >= g1) {
          x[0] += spec.delta;
          labels[i] = 1;
        }
      }
      return {PointSet(n, m, std::move(coords)), Partition(2, labels)};
    }
    case Model::kFivePoint: {
      const auto c = five_point_coords();
      coords.assign(5 * m, 0.0);
      for (std::size_t p = 0; p < 5; ++p)
        for (std::size_t a = 0; a < kFivePointDim; ++a)
          coords[p * m + a] = c[p][a];
      labels.assign(kFivePointLabels.begin(), kFivePointLabels.end());
      return {PointSet(5, m, std::move(coords)), Partition(2, labels)};
    }
    case Model::kFiveBall: {
      const auto c = five_point_coords();
      const std::size_t np = spec.n_prime;
      coords.assign(5 * np * m, 0.0);
      labels.assign(5 * np, 0);
      std::vector<double> dir(m);
      for (std::size_t p = 0; p < 5; ++p) {
        for (std::size_t l = 0; l < np; ++l) {
          const std::size_t i = p * np + l;
          double* x = &coords[i * m];
          if (spec.radius > 0.0) {
            sample_direction(rng, m, dir.data());
            const double rho = spec.radius * std::pow(rng.uniform(),
                                                      1.0 / static_cast<double>(m));
            for (std::size_t a = 0; a < m; ++a) x[a] = rho * dir[a];
          }
          for (std::size_t a = 0; a < kFivePointDim; ++a) x[a] += c[p][a];
          labels[i] = kFivePointLabels[p];
        }
      }
      return {PointSet(5 * np, m, std::move(coords)), Partition(2, labels)};
    }
  }
  throw InputError("unhandled model");
}

SymMatrix reference_nontight_matrix(std::size_t n_prime) {
  if (n_prime < 1) throw InputError("n' must be >= 1");
  // Numerators over 14 n' between balls p and q (p, q in 0..4).
  static constexpr int kBlock[5][5] = {{6, 1, 1, 3, 3},
                                       {1, 6, 1, 3, 3},
                                       {1, 1, 6, 3, 3},
                                       {3, 3, 3, 5, 0},
                                       {3, 3, 3, 0, 5}};
  const std::size_t n = 5 * n_prime;
  const double denom = 14.0 * static_cast<double>(n_prime);
  SymMatrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      x(i, j) = kBlock[i / n_prime][j / n_prime] / denom;
  return x;
}

double recovery_threshold(double r1) {
  if (!(r1 > 0.0 && r1 <= 1.0)) throw InputError("r1 must lie in (0, 1]");
  return 1.0 + std::sqrt(1.0 + 2.0 / r1);
}

}  // namespace kmlp
