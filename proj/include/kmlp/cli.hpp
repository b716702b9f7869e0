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

// Command-line front end and the recovery-sweep experiment driver.
//
// Exit codes: 0 success (converged / certified), 1 input error,
// 2 valid run that did not converge or certify.

#ifndef KMLP_CLI_HPP
#define KMLP_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "kmlp/certify.hpp"
#include "kmlp/cutplane.hpp"
#include "kmlp/instance_gen.hpp"

namespace kmlp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

enum class SweepMode { kLp, kCertify, kProximity };
std::string_view sweep_mode_name(SweepMode mode);
SweepMode parse_sweep_mode(std::string_view name);

struct SweepSpec {
  Model model = Model::kSphere;
  SweepMode mode = SweepMode::kLp;
  std::size_t n = 100;
  std::size_t m = 2;
  double r1 = 1.0;
  double delta_min = 2.0;
  double delta_max = 4.0;
  double delta_step = 0.5;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  SolveConfig solve{};
  CertifyOrder order = CertifyOrder::kMostNegative;
};

/// One row per Delta. recovery_rate: lp mode counts tight runs that return
/// the planted partition; certify / proximity modes count certified planted
/// partitions. tightness_rate: lp mode counts tight runs; proximity mode
/// counts strict proximity (which implies uniqueness); certify mode repeats
/// the recovery rate. mean_rounds is 0 outside lp mode.
struct SweepRow {
  double delta = 0.0;
  std::size_t trials = 0;
  double recovery_rate = 0.0;
  double tightness_rate = 0.0;
  double mean_rounds = 0.0;
};

/// delta_min, delta_min + step, ... up to delta_max (inclusive, 1e-9 slack).
std::vector<double> delta_grid(double delta_min, double delta_max, double step);

/// Trial t at grid point g uses seed derive_seed(spec.seed, g * trials + t).
std::vector<SweepRow> recovery_sweep(const SweepSpec& spec);

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace kmlp

#endif  // KMLP_CLI_HPP
