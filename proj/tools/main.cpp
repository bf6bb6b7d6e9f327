// Copyright 2026 The empdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// empdist — command-line driver for the sweep harness.
//
// Exit codes: 0 success, 2 an acceptance check failed, 1 usage or runtime error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "empdist/errors.hpp"
#include "empdist/harness.hpp"
#include "json.hpp"

namespace {

using namespace empdist;

constexpr int kCheckFailed = 2;

// Flags shared by `sweep` and `concentration`; unset optionals leave the
// config file's value alone.
struct Overrides {
  std::string config_path;
  std::optional<std::string> experiment;
  std::optional<std::string> model;
  std::optional<int> dim;
  std::optional<std::string> kernel;
  std::optional<double> q;
  std::optional<double> s;
  std::vector<std::size_t> n_grid;
  std::optional<int> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<int> fixed_J;
  std::optional<double> t;
  int jobs = 1;
  std::string out_csv;
  std::string out_json;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--experiment", o.experiment, "experiment kind");
  cmd->add_option("--model", o.model, "i.i.d. law: uniform_cube | cantor_ifs");
  cmd->add_option("--dim", o.dim, "dimension");
  cmd->add_option("--kernel", o.kernel, "chain: inverse_doubling | four_corners");
  cmd->add_option("--q", o.q, "Hoelder exponent");
  cmd->add_option("--s", o.s, "Fourier regularity");
  cmd->add_option("--n", o.n_grid, "sample sizes, comma separated")->delimiter(',');
  cmd->add_option("--replicates", o.replicates, "replicates per n");
  cmd->add_option("--seed", o.seed, "base seed (falls back to $EMPDIST_SEED)");
  cmd->add_option("--fixed-J", o.fixed_J, "use this depth instead of the default depth rule");
  cmd->add_option("--t", o.t, "tail threshold (concentration)");
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out-csv", o.out_csv, "CSV output path");
  cmd->add_option("--out-json", o.out_json, "JSON output path");
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("EMPDIST_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long long s = std::stoull(v, &pos, 0);
    if (pos != std::string(v).size()) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("EMPDIST_SEED is not an integer: ") + v);
  }
}

ExperimentConfig build_config(Overrides& o) {
  ExperimentConfig c;
  bool seed_from_file = false;
  if (!o.config_path.empty()) {
    const std::string text = slurp(o.config_path);
    c = config_from_json(text);
    const auto j = nlohmann::json::parse(text);
    seed_from_file = j.contains("seed");
    if (o.out_csv.empty() && j.contains("out_csv")) o.out_csv = j["out_csv"].get<std::string>();
    if (o.out_json.empty() && j.contains("out_json")) o.out_json = j["out_json"].get<std::string>();
  }
  if (o.experiment) c.experiment = parse_experiment(*o.experiment);
  if (o.model) {
    c.model.kind = parse_iid_kind(*o.model);
    if (c.model.kind == IidModel::Kind::cantor_ifs) c.model.dim = 2;
  }
  if (o.dim) c.model.dim = *o.dim;
  if (o.kernel) c.kernel = parse_kernel(*o.kernel);
  if (o.q) c.q = *o.q;
  if (o.s) c.s = *o.s;
  if (!o.n_grid.empty()) c.n_grid = o.n_grid;
  if (o.replicates) c.replicates = *o.replicates;
  if (o.fixed_J) {
    c.depth_policy = DepthPolicy::fixed;
    c.fixed_J = *o.fixed_J;
  }
  if (o.t) c.t = *o.t;
  if (o.seed) {
    c.seed = *o.seed;
  } else if (!seed_from_file) {
    if (auto s = env_seed()) c.seed = *s;
  }
  c.jobs = o.jobs;
  return c;
}

void print_sweep(const SweepResult& r) {
  std::printf("%s (%s)\n", std::string(to_string(r.config.experiment)).c_str(),
              r.estimator.c_str());
  std::printf("%10s %4s %6s %14s %14s %14s %14s\n", "n", "J", "R", "mean", "stderr", "theory",
              "mean/theory");
  for (const auto& row : r.rows) {
    std::printf("%10zu %4d %6d %14.6e %14.6e %14.6e %14.4f\n", row.n, row.J, row.replicates,
                row.mean, row.stderr_, row.theory_value, row.mean / row.theory_value);
  }
  if (r.slope_fit) {
    std::printf("slope %.4f  intercept %.4f  r2 %.4f\n", r.slope_fit->slope,
                r.slope_fit->intercept, r.slope_fit->r2);
  }
  std::printf("min_C %.6g\n", r.min_C);
  for (const auto& c : r.checks) {
    std::printf("check %-26s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                c.detail.c_str());
  }
}

int cmd_sweep(Overrides& o) {
  const ExperimentConfig c = build_config(o);
  const SweepResult r = run_sweep(c);
  emit_outputs(r, o.out_csv, o.out_json);
  print_sweep(r);
  return r.all_checks_passed() ? 0 : kCheckFailed;
}

int cmd_concentration(Overrides& o) {
  ExperimentConfig c = build_config(o);
  const ConcentrationResult r = run_concentration(c);
  const std::string json = concentration_to_json(r);
  if (!o.out_json.empty()) {
    std::ofstream os(o.out_json, std::ios::binary | std::ios::trunc);
    if (!(os << json)) throw std::runtime_error("cannot write " + o.out_json);
  }
  const auto& t = r.tail;
  std::printf("%s, n = %zu, J = %d, R = %zu\n", r.estimator.c_str(), r.n, r.J, t.replicates);
  std::printf("mean %.6g  t %.6g  exceed %zu  freq %.5f  bound %.5f  slack %.5f  %s\n",
              t.empirical_mean, t.t, t.exceed_count, t.empirical_frequency, t.bound,
              t.binomial_slack, t.passed ? "PASS" : "FAIL");
  return t.passed ? 0 : kCheckFailed;
}

int cmd_verify_theory() {
  bool ok = true;
  for (const auto& c : verify_theory_table()) {
    std::printf("%-56s %.12g  (%s)  %s\n", c.name.c_str(), c.value, c.expectation.c_str(),
                c.passed ? "PASS" : "FAIL");
    ok = ok && c.passed;
  }
  return ok ? 0 : kCheckFailed;
}

int cmd_decompose(int count, std::optional<std::uint64_t> seed) {
  const std::uint64_t s = seed ? *seed : env_seed().value_or(0);
  const DecomposeSummary d = decompose_demo(count, s);
  std::printf("functions %d  coefficients %zu  violations %zu\n", d.functions, d.coefficients,
              d.violations);
  std::printf("worst |alpha| / bound %.6f  worst residual / bound %.6f\n",
              d.worst_coefficient_ratio, d.worst_residual_ratio);
  return d.violations == 0 ? 0 : kCheckFailed;
}

int cmd_chain(const std::string& kernel, std::size_t n, int pairs,
              std::optional<std::uint64_t> seed) {
  const std::uint64_t s = seed ? *seed : env_seed().value_or(0);
  const ChainDiagnostics d = chain_diagnostics(parse_kernel(kernel), n, pairs, s);
  bool ok = true;
  std::printf("%4s %14s %14s\n", "t", "contraction", "D theta^t");
  for (std::size_t t = 0; t < d.contraction.size(); ++t) {
    const bool within = d.contraction[t] <= d.claimed[t] * (1.0 + 1e-9);
    ok = ok && within;
    std::printf("%4zu %14.6e %14.6e %s\n", t, d.contraction[t], d.claimed[t],
                within ? "" : "EXCEEDS");
  }
  std::printf("autocorrelation of x_0:");
  for (std::size_t i = 0; i < d.lags.size(); ++i) {
    std::printf("  lag %d: %.4e", d.lags[i], d.autocorrelation[i]);
  }
  std::printf("\n");
  return ok ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical-measure convergence laboratory"};
  app.require_subcommand(1);

  Overrides sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "replicate sweep over an n grid");
  add_common(sweep, sweep_opts);

  Overrides conc_opts;
  auto* conc = app.add_subcommand("concentration", "empirical tail check at one n");
  add_common(conc, conc_opts);

  auto* theory = app.add_subcommand("verify-theory", "closed-form constant table");

  int count = 100;
  std::optional<std::uint64_t> dec_seed;
  auto* dec = app.add_subcommand("decompose", "Hoelder decomposition on random functions");
  dec->add_option("--count", count, "number of functions")->check(CLI::PositiveNumber);
  dec->add_option("--seed", dec_seed, "base seed");

  std::string kernel = "inverse_doubling";
  std::size_t chain_n = 100000;
  int pairs = 1000;
  std::optional<std::uint64_t> chain_seed;
  auto* chain = app.add_subcommand("chain-diagnose", "contraction and autocorrelation");
  chain->add_option("--kernel", kernel, "inverse_doubling | four_corners");
  chain->add_option("--n", chain_n, "trajectory length for autocorrelation");
  chain->add_option("--pairs", pairs, "coupled start pairs")->check(CLI::PositiveNumber);
  chain->add_option("--seed", chain_seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*conc) return cmd_concentration(conc_opts);
    if (*theory) return cmd_verify_theory();
    if (*dec) return cmd_decompose(count, dec_seed);
    if (*chain) return cmd_chain(kernel, chain_n, pairs, chain_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "empdist: %s\n", e.what());
    return 1;
  }
  return 1;
}
