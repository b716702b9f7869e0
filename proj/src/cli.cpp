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

#include "kmlp/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "kmlp/io.hpp"
#include "kmlp/rng.hpp"

namespace kmlp {

using json = nlohmann::json;

std::string_view sweep_mode_name(SweepMode mode) {
  switch (mode) {
    case SweepMode::kLp: return "lp";
    case SweepMode::kCertify: return "certify";
    case SweepMode::kProximity: return "proximity";
  }
  return "unknown";
}

SweepMode parse_sweep_mode(std::string_view name) {
  if (name == "lp") return SweepMode::kLp;
  if (name == "certify") return SweepMode::kCertify;
  if (name == "proximity") return SweepMode::kProximity;
  throw InputError("unknown sweep mode: " + std::string(name));
}

std::vector<double> delta_grid(double delta_min, double delta_max, double step) {
  if (!(step > 0.0) || !std::isfinite(delta_min) || !std::isfinite(delta_max) ||
      delta_max < delta_min)
    throw InputError("empty Delta grid");
  const auto count =
      static_cast<std::size_t>(std::floor((delta_max - delta_min) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t g = 0; g < count; ++g)
    grid[g] = delta_min + static_cast<double>(g) * step;
  return grid;
}

namespace {

struct TrialOutcome {
  bool recovered = false;
  bool tight = false;
  double rounds = 0.0;
};

TrialOutcome run_trial(const SweepSpec& spec, double delta, std::uint64_t seed) {
  GenSpec g;
  g.model = spec.model;
  g.n = spec.n;
  g.m = spec.m;
  g.r1 = spec.r1;
  g.delta = delta;
  g.seed = seed;
  const auto inst = generate(g);
  TrialOutcome o;
  switch (spec.mode) {
    case SweepMode::kLp: {
      SolveConfig cfg = spec.solve;
      cfg.k = 2;
      cfg.seed = seed;
      const auto r = solve_kmeans_lp(inst.points, cfg);
      o.tight = r.tight;
      o.recovered = r.tight && r.partition.same_clustering(inst.planted);
      o.rounds = static_cast<double>(r.trace.rounds.size());
      break;
    }
    case SweepMode::kCertify: {
      const auto d = squared_distances(inst.points);
      o.recovered = certify(gamma_values(d, inst.planted), spec.order).success;
      o.tight = o.recovered;
      break;
    }
    case SweepMode::kProximity: {
      const auto d = squared_distances(inst.points);
      const auto v = proximity_check(d, inst.planted).verdict;
      o.recovered = v != ProximityVerdict::kFails;
      o.tight = v == ProximityVerdict::kHoldsStrict;
      break;
    }
  }
  return o;
}

}  // namespace

std::vector<SweepRow> recovery_sweep(const SweepSpec& spec) {
  if (spec.model != Model::kSphere && spec.model != Model::kBall)
    throw InputError("recovery sweeps need the ssm or sbm model");
  if (spec.trials < 1) throw InputError("trials must be >= 1");
  const auto grid = delta_grid(spec.delta_min, spec.delta_max, spec.delta_step);
  {
    GenSpec probe;
    probe.model = spec.model;
    probe.n = spec.n;
    probe.m = spec.m;
    probe.r1 = spec.r1;
    probe.delta = grid.front();
    validate(probe);
  }
  const std::size_t total = grid.size() * spec.trials;
  std::vector<TrialOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t idx; (idx = next.fetch_add(1)) < total;) {
      try {
        outcomes[idx] = run_trial(spec, grid[idx / spec.trials],
                                  derive_seed(spec.seed, idx));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(spec.jobs, total));
  std::vector<std::thread> threads;
  for (std::size_t j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepRow row;
    row.delta = grid[g];
    row.trials = spec.trials;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const auto& o = outcomes[g * spec.trials + t];
      row.recovery_rate += o.recovered;
      row.tightness_rate += o.tight;
      row.mean_rounds += o.rounds;
    }
    const double tr = static_cast<double>(spec.trials);
    row.recovery_rate /= tr;
    row.tightness_rate /= tr;
    row.mean_rounds /= tr;
    rows.push_back(row);
  }
  return rows;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json round_json(const RoundRecord& r) {
  return {{"round", r.round},
          {"f_lb", finite_or_null(r.f_lb)},
          {"f_ub", r.f_ub},
          {"r_g", finite_or_null(r.r_g)},
          {"lp_bound", finite_or_null(r.lp_bound)},
          {"lp_objective", r.lp_objective},
          {"lp_tol", r.lp_tol},
          {"lp_status", status_name(r.lp_status)},
          {"lp_iterations", r.lp_iterations},
          {"cuts_in_lp", r.cuts_in_lp},
          {"cuts_removed", r.cuts_removed},
          {"cuts_added", r.cuts_added},
          {"violated_found", r.violated_found},
          {"t_max", r.t_max},
          {"exhaustive", r.exhaustive},
          {"seconds_lp", r.seconds_lp},
          {"seconds_round", r.seconds_round},
          {"seconds_separation", r.seconds_separation}};
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

struct SolveOptions {
  std::size_t t_max = 0;
  double eps_opt = 1e-4;
  double eps_vio = kViolationTol;
  std::size_t p_init = 0;
  std::size_t p_max = 0;
  double lp_time_limit = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  std::string rounding = "normalized";
  std::size_t max_rounds = 200;

  void attach(CLI::App* app) {
    app->add_option("--t-max", t_max, "Largest cut size (default K)")
        ->envname("KMLP_T_MAX");
    app->add_option("--eps-opt", eps_opt, "Relative optimality gap")
        ->envname("KMLP_EPS_OPT")->capture_default_str();
    app->add_option("--eps-vio", eps_vio, "Violation tolerance")
        ->envname("KMLP_EPS_VIO")->capture_default_str();
    app->add_option("--p-init", p_init, "Initial cuts (default 10n)")
        ->envname("KMLP_P_INIT");
    app->add_option("--p-max", p_max, "Cuts added per round (default 50n)")
        ->envname("KMLP_P_MAX");
    app->add_option("--lp-time-limit", lp_time_limit, "Seconds per LP solve")
        ->envname("KMLP_LP_TIME_LIMIT");
    app->add_option("--seed", seed, "Random seed")
        ->envname("KMLP_SEED")->capture_default_str();
    app->add_option("--rounding-mode", rounding, "normalized | unscaled")
        ->envname("KMLP_ROUNDING_MODE")->capture_default_str();
    app->add_option("--max-rounds", max_rounds, "Cutting-plane round limit")
        ->envname("KMLP_MAX_ROUNDS")->capture_default_str();
  }

  SolveConfig config(std::size_t k) const {
    SolveConfig c;
    c.k = k;
    c.t_max = t_max;
    c.eps_opt = eps_opt;
    c.eps_vio = eps_vio;
    c.p_init = p_init;
    c.p_max = p_max;
    c.lp_time_limit = lp_time_limit;
    c.seed = seed;
    c.rounding = parse_rounding_mode(rounding);
    c.max_rounds = max_rounds;
    return c;
  }

  json echo() const {
    return {{"t_max", t_max},
            {"eps_opt", eps_opt},
            {"eps_vio", eps_vio},
            {"p_init", p_init},
            {"p_max", p_max},
            {"lp_time_limit", finite_or_null(lp_time_limit)},
            {"seed", seed},
            {"rounding_mode", rounding},
            {"max_rounds", max_rounds}};
  }
};

int cmd_solve(const std::string& input, bool header, std::size_t k,
              const SolveOptions& so, const std::string& out_path,
              std::ostream& out) {
  const auto points = read_points_csv_file(input, header);
  if (k > points.size())
    throw InputError("K=" + std::to_string(k) + " exceeds n=" +
                     std::to_string(points.size()));
  const auto r = solve_kmeans_lp(points, so.config(k));

  double t_lp = 0, t_round = 0, t_sep = 0;
  json trace = json::array();
  for (const auto& rec : r.trace.rounds) {
    t_lp += rec.seconds_lp;
    t_round += rec.seconds_round;
    t_sep += rec.seconds_separation;
    trace.push_back(round_json(rec));
  }
  const bool converged = r.status == SolveStatus::kConverged;
  json doc = {
      {"instance",
       {{"input", input},
        {"model", "csv"},
        {"n", points.size()},
        {"m", points.dim()},
        {"k", k},
        {"seed", so.seed}}},
      {"assignments", r.partition.canonical().assignment()},
      {"f_ub", r.f_ub},
      {"f_lb", finite_or_null(r.f_lb)},
      {"r_g", finite_or_null(r.r_g)},
      {"tight", r.tight},
      {"converged", converged},
      {"status", status_name(r.status)},
      {"rounds", r.trace.rounds.size()},
      {"cuts_final", r.pool.size()},
      {"timings",
       {{"init", r.trace.seconds_init},
        {"lp", t_lp},
        {"rounding", t_round},
        {"separation", t_sep},
        {"total", r.trace.seconds_total}}},
      {"config", so.echo()},
      {"trace", trace}};
  Output o(out_path, out);
  o.stream() << doc.dump(2) << '\n';
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_lp_direct(const std::string& input, bool header, std::size_t k,
                  std::size_t t, double tol, double time_limit,
                  const std::string& out_path, std::ostream& out) {
  const auto points = read_points_csv_file(input, header);
  if (k > points.size()) throw InputError("K exceeds n");
  if (t == 0) t = k;
  LpSolveOptions opts;
  opts.tol = tol;
  opts.time_limit = time_limit;
  const auto r = solve_full_lp(squared_distances(points), k, t, opts);
  json doc = {{"n", points.size()},
              {"m", points.dim()},
              {"k", k},
              {"t", t},
              {"num_cuts", r.num_cuts},
              {"status", status_name(r.solution.status)},
              {"objective", r.solution.primal_objective},
              {"dual_objective", r.solution.dual_objective},
              {"safe_lower_bound", finite_or_null(r.safe_bound)},
              {"primal_residual", r.solution.primal_residual},
              {"dual_residual", r.solution.dual_residual},
              {"gap", r.solution.gap},
              {"iterations", r.solution.iterations},
              {"seconds", r.solution.seconds},
              {"tight", r.tight}};
  if (r.tight) {
    const auto p = extract_partition(r.x);
    doc["assignments"] = p.canonical().assignment();
    doc["kmeans_cost"] = kmeans_cost(points, p);
  }
  Output o(out_path, out);
  o.stream() << doc.dump(2) << '\n';
  return r.solution.status == LpStatus::kOptimal ? kExitOk : kExitNotConverged;
}

int cmd_certify(const std::string& input, const std::string& labels, bool header,
                bool cross_check, const std::string& order,
                const std::string& out_path, std::ostream& out) {
  const auto points = read_points_csv_file(input, header);
  const auto p = read_labels_file(labels);
  if (p.size() != points.size())
    throw InputError("labels (" + std::to_string(p.size()) +
                     ") and points (" + std::to_string(points.size()) +
                     ") disagree on n");
  if (p.num_clusters() != 2) throw InputError("labels must define exactly 2 clusters");
  CertifyOrder ord;
  if (order == "most-negative") {
    ord = CertifyOrder::kMostNegative;
  } else if (order == "lexicographic") {
    ord = CertifyOrder::kLexicographic;
  } else {
    throw InputError("unknown order: " + order);
  }

  const auto d = squared_distances(points);
  const auto stats = two_cluster_stats(d, p);
  const auto prox = proximity_check(d, p);
  const auto st = certify(gamma_values(d, stats), ord);

  json pairs = json::array();
  for (const auto& wp : prox.worst_pair) {
    if (wp[0] >= points.size()) {
      pairs.push_back(nullptr);
    } else {
      pairs.push_back({wp[0], wp[1]});
    }
  }
  json min_slack = json::array();
  for (double s : prox.min_slack) min_slack.push_back(finite_or_null(s));
  json doc = {{"n", points.size()},
              {"cluster_sizes", {stats.members[0].size(), stats.members[1].size()}},
              {"r1", stats.r1},
              {"r2", stats.r2},
              {"eta", stats.eta},
              {"proximity",
               {{"verdict", verdict_name(prox.verdict)},
                {"min_slack", min_slack},
                {"worst_pair", pairs}}},
              {"certify",
               {{"success", st.success},
                {"repairs", st.repairs},
                {"order", order}}}};
  if (!st.success) {
    doc["certify"]["failed_pair"] = {st.failed_pair[0], st.failed_pair[1]};
    doc["certify"]["deficit"] = st.deficit;
  }
  bool ok = st.success;
  if (cross_check) {
    if (points.size() > 60) throw InputError("--cross-check is limited to n <= 60");
    const auto r = solve_full_lp(d, 2, 2);
    const double planted = kmeans_cost(points, p);
    const double v = r.solution.primal_objective;
    const bool match = std::abs(v - planted) <= 1e-6 * (1.0 + std::abs(planted));
    doc["cross_check"] = {{"lp_objective", v},
                          {"safe_lower_bound", finite_or_null(r.safe_bound)},
                          {"planted_cost", planted},
                          {"values_match", match},
                          {"partition_matrix", r.tight}};
    if (st.success) ok = match && r.tight;
  }
  Output o(out_path, out);
  o.stream() << doc.dump(2) << '\n';
  return ok ? kExitOk : kExitNotConverged;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"LP relaxation of K-means: cutting planes, certificates, instances"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kmlp 0.1.0");

  std::string input, labels, out_path, labels_out;
  bool header = false;
  std::size_t k = 0;
  SolveOptions so;

  auto* solve_cmd = app.add_subcommand("solve", "Run the cutting-plane solver");
  solve_cmd->add_option("--input", input, "Points CSV")->required();
  solve_cmd->add_option("--k", k, "Number of clusters")->required();
  solve_cmd->add_flag("--header", header, "Skip one header line");
  solve_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");
  so.attach(solve_cmd);

  GenSpec gen;
  std::string model = "ssm";
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic instance");
  gen_cmd->add_option("--model", model, "ssm | sbm | five-point | five-ball")
      ->capture_default_str();
  auto* m_opt = gen_cmd->add_option("--m", gen.m, "Dimension");
  gen_cmd->add_option("--n", gen.n, "Points (ssm/sbm)")->capture_default_str();
  gen_cmd->add_option("--delta", gen.delta, "Center distance")->capture_default_str();
  gen_cmd->add_option("--r1", gen.r1, "2|G1|/n")->capture_default_str();
  gen_cmd->add_option("--radius", gen.radius, "Ball radius (five-ball)")
      ->capture_default_str();
  gen_cmd->add_option("--n-prime", gen.n_prime, "Points per ball (five-ball)")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")
      ->envname("KMLP_SEED")->capture_default_str();
  gen_cmd->add_option("--out", out_path, "Points CSV (default stdout)");
  gen_cmd->add_option("--labels-out", labels_out, "Planted labels file");

  std::string order = "most-negative";
  bool cross_check = false;
  auto* cert_cmd = app.add_subcommand("certify", "Check a two-cluster partition");
  cert_cmd->add_option("--input", input, "Points CSV")->required();
  cert_cmd->add_option("--labels", labels, "Labels file")->required();
  cert_cmd->add_flag("--header", header, "Skip one header line");
  cert_cmd->add_flag("--cross-check", cross_check, "Also solve the full LP (n <= 60)");
  cert_cmd->add_option("--order", order, "most-negative | lexicographic")
      ->capture_default_str();
  cert_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  SweepSpec sweep;
  std::string sweep_mode = "lp";
  std::string sweep_model = "ssm";
  auto* sweep_cmd = app.add_subcommand("recovery-sweep", "Empirical recovery rates");
  sweep_cmd->add_option("--mode", sweep_mode, "lp | certify | proximity")
      ->capture_default_str();
  sweep_cmd->add_option("--model", sweep_model, "ssm | sbm")->capture_default_str();
  sweep_cmd->add_option("--n", sweep.n, "Points")->capture_default_str();
  sweep_cmd->add_option("--m", sweep.m, "Dimension")->capture_default_str();
  sweep_cmd->add_option("--r1", sweep.r1, "2|G1|/n")->capture_default_str();
  sweep_cmd->add_option("--delta-min", sweep.delta_min)->capture_default_str();
  sweep_cmd->add_option("--delta-max", sweep.delta_max)->capture_default_str();
  sweep_cmd->add_option("--delta-step", sweep.delta_step)->capture_default_str();
  sweep_cmd->add_option("--trials", sweep.trials)->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent trials")
      ->envname("KMLP_JOBS")->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");
  so.attach(sweep_cmd);

  std::size_t t = 0;
  double tol = 1e-8;
  double time_limit = std::numeric_limits<double>::infinity();
  auto* direct_cmd = app.add_subcommand("lp-direct", "Solve the full LP once");
  direct_cmd->add_option("--input", input, "Points CSV")->required();
  direct_cmd->add_option("--k", k, "Number of clusters")->required();
  direct_cmd->add_option("--t", t, "Cut size (default K)");
  direct_cmd->add_flag("--header", header, "Skip one header line");
  direct_cmd->add_option("--tol", tol, "Solver tolerance")->capture_default_str();
  direct_cmd->add_option("--time-limit", time_limit, "Seconds");
  direct_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(input, header, k, so, out_path, out);
    if (*direct_cmd)
      return cmd_lp_direct(input, header, k, t, tol, time_limit, out_path, out);
    if (*cert_cmd)
      return cmd_certify(input, labels, header, cross_check, order, out_path, out);
    if (*gen_cmd) {
      gen.model = parse_model(model);
      if (m_opt->count() == 0 &&
          (gen.model == Model::kFivePoint || gen.model == Model::kFiveBall))
        gen.m = 3;
      const auto inst = generate(gen);
      json spec = {{"model", model_name(gen.model)},
                   {"n", inst.points.size()},
                   {"m", gen.m},
                   {"delta", gen.delta},
                   {"r1", gen.r1},
                   {"radius", gen.radius},
                   {"n_prime", gen.n_prime},
                   {"seed", gen.seed}};
      Output o(out_path, out);
      o.stream() << "# " << spec.dump() << '\n';
      write_points_csv(o.stream(), inst.points);
      if (!labels_out.empty()) {
        Output lo(labels_out, out);
        write_labels(lo.stream(), inst.planted);
      }
      return kExitOk;
    }
    if (*sweep_cmd) {
      sweep.mode = parse_sweep_mode(sweep_mode);
      sweep.model = parse_model(sweep_model);
      sweep.seed = so.seed;
      sweep.solve = so.config(2);
      const auto rows = recovery_sweep(sweep);
      Output o(out_path, out);
      o.stream() << "delta,trials,recovery_rate,tightness_rate,mean_rounds\n";
      char buf[128];
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%zu,%.6g,%.6g,%.6g\n", r.delta,
                      r.trials, r.recovery_rate, r.tightness_rate, r.mean_rounds);
        o.stream() << buf;
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace kmlp
