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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "empdist/errors.hpp"
#include "empdist/harness.hpp"

using namespace empdist;

namespace {

ExperimentConfig small_w1() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::iid_w1_1d;
  c.model = IidModel::uniform(1);
  c.n_grid = {100, 1000};
  c.replicates = 2;
  c.seed = 11;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("log-log slope fits") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {10.0, 100.0, 1000.0, 1e4}) pts.emplace_back(n, 1.0 / std::sqrt(n));
  auto f = fit_loglog_slope(pts);
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(f.r2 == doctest::Approx(1.0));

  pts.clear();
  for (double n : {10.0, 100.0, 1000.0}) pts.emplace_back(n, 2.0);
  f = fit_loglog_slope(pts);
  CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(2.0)));

  pts.clear();
  for (double n : {8.0, 64.0, 512.0, 4096.0}) pts.emplace_back(n, 3.0 * std::pow(n, -1.0 / 3.0));
  f = fit_loglog_slope(pts);
  CHECK(f.slope == doctest::Approx(-1.0 / 3.0));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));

  // Noisy points keep r^2 within [0, 1].
  f = fit_loglog_slope({{10, 1.0}, {20, 3.0}, {40, 0.5}, {80, 2.0}});
  CHECK(f.r2 >= 0.0);
  CHECK(f.r2 <= 1.0);

  CHECK_THROWS_AS(fit_loglog_slope({{10, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(fit_loglog_slope({{10, 1.0}, {20, 0.0}}), InvalidArgument);
}

TEST_CASE("min_C dominates every row and is tight") {
  const std::vector<SweepRow> rows{{100, 0, 5, 0.3, 0, 0, 0.2}, {1000, 0, 5, 0.1, 0, 0, 0.09},
                                   {10000, 0, 5, 0.02, 0, 0, 0.03}};
  const double c = min_constant(rows);
  CHECK(c == doctest::Approx(1.5));
  bool tight = false;
  for (const auto& r : rows) {
    CHECK(r.mean <= c * r.theory_value * (1 + 1e-15));
    tight = tight || r.mean > c * (1 - 1e-9) * r.theory_value;
  }
  CHECK(tight);
}

TEST_CASE("sweeps are deterministic and independent of the worker count") {
  const auto cfg = small_w1();
  const auto a = run_sweep(cfg);
  REQUIRE(a.rows.size() == 2);
  for (const auto& r : a.rows) {
    CHECK(r.replicates == 2);
    CHECK(r.mean > 0.0);
    CHECK(r.stderr_ == doctest::Approx(r.std / std::sqrt(2.0)));
    CHECK(r.theory_value == doctest::Approx(1.0 / (2.0 * (std::sqrt(2.0) - 1.0)) / std::sqrt(r.n)));
  }
  CHECK(a.estimator == "w1_exact_1d");
  CHECK(run_sweep(cfg) == a);

  auto par = cfg;
  par.jobs = 4;
  const auto b = run_sweep(par);
  CHECK(b == a);
  CHECK(sweep_to_csv(b) == sweep_to_csv(a));
  CHECK(sweep_to_json(b) == sweep_to_json(a));

  auto other = cfg;
  other.seed = 12;
  CHECK_FALSE(run_sweep(other).rows[0].mean == a.rows[0].mean);

  // min_C holds for the sweep's own rows.
  for (const auto& r : a.rows) CHECK(r.mean <= a.min_C * r.theory_value * (1 + 1e-12));
}

TEST_CASE("experiment plans") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::iid_dyadic;
  c.model = IidModel::uniform(2);
  c.n_grid = {256, 1024};
  c.replicates = 3;
  const auto r = run_sweep(c);
  CHECK(r.rows[0].J == 4);
  CHECK(r.rows[1].J == 5);
  c.depth_policy = DepthPolicy::fixed;
  c.fixed_J = 3;
  for (const auto& row : run_sweep(c).rows) CHECK(row.J == 3);

  ExperimentConfig k;
  k.experiment = ExperimentKind::cantor_critical;
  k.model = IidModel::cantor();
  k.q = 0.5;
  k.n_grid = {64, 256};
  k.replicates = 3;
  const auto kr = run_sweep(k);
  CHECK(kr.rows[0].J == 3);
  CHECK(kr.rows[1].J == 4);

  ExperimentConfig m;
  m.experiment = ExperimentKind::markov_fourier;
  m.kernel = KernelKind::inverse_doubling;
  m.s = 1.0;
  m.n_grid = {1024, 4096};
  m.replicates = 2;
  const auto mr = run_sweep(m);
  CHECK(mr.rows[0].J >= 3);
  CHECK(mr.rows[1].J > mr.rows[0].J);
  CHECK(mr.slope_fit.has_value());

  ExperimentConfig d;
  d.experiment = ExperimentKind::markov_dyadic;
  d.kernel = KernelKind::four_corners;
  d.q = 0.5;
  d.n_grid = {256};
  d.replicates = 2;
  const auto dr = run_sweep(d);
  CHECK(dr.rows.size() == 1);
  CHECK_FALSE(dr.slope_fit.has_value());
}

TEST_CASE("acceptance checks are attached to sweeps") {
  auto c = small_w1();
  c.slope_min = -10.0;
  c.slope_max = 10.0;
  c.check_theory_dominates = true;
  const auto r = run_sweep(c);
  CHECK(r.checks.size() == 2);
  CHECK(r.all_checks_passed());
  c.slope_min = 5.0;
  c.slope_max = std::nullopt;
  CHECK_FALSE(run_sweep(c).all_checks_passed());
}

TEST_CASE("invalid configurations are rejected") {
  auto c = small_w1();
  c.model = IidModel::uniform(2);
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_w1();
  c.n_grid = {1000, 100};
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_w1();
  c.n_grid = {};
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_w1();
  c.replicates = 0;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_w1();
  c.experiment = ExperimentKind::markov_fourier;
  c.kernel = KernelKind::four_corners;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_w1();
  c.experiment = ExperimentKind::cantor_critical;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  c = small_w1();
  c.depth_policy = DepthPolicy::fixed;
  c.fixed_J = 0;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  CHECK_THROWS_AS(parse_experiment("nope"), InvalidArgument);
  CHECK_THROWS_AS(parse_kernel("nope"), InvalidArgument);
}

TEST_CASE("JSON and CSV outputs") {
  auto cfg = small_w1();
  cfg.slope_min = -0.9;
  const auto r = run_sweep(cfg);

  const std::string json = sweep_to_json(r);
  const auto back = sweep_from_json(json);
  CHECK(back == r);
  CHECK(sweep_to_json(back) == json);
  CHECK(config_from_json(config_to_json(cfg)) == cfg);
  CHECK_THROWS_AS(config_from_json(R"({"experiment": "iid_w1_1d", "bogus": 1})"), InvalidArgument);

  const std::string csv = sweep_to_csv(r);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "experiment,estimator,d,q_or_s,n,J,replicates,mean,std,stderr,theory_value");
  std::size_t rows = 0;
  for (std::string l; std::getline(lines, l);) rows += l.empty() ? 0 : 1;
  CHECK(rows == cfg.n_grid.size());

  const auto dir = std::filesystem::temp_directory_path() / "empdist_harness_test";
  std::filesystem::create_directories(dir);
  emit_outputs(r, (dir / "a.csv").string(), (dir / "a.json").string());
  CHECK(slurp(dir / "a.csv") == csv);
  CHECK(slurp(dir / "a.json") == json);
  SweepResult empty = r;
  empty.rows.clear();
  CHECK_THROWS_AS(emit_outputs(empty, (dir / "b.csv").string(), ""), InvalidArgument);
  CHECK_THROWS_AS(emit_outputs(r, (dir / "missing" / "x.csv").string(), ""), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("concentration runs") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::iid_dyadic;
  c.model = IidModel::uniform(2);
  c.n_grid = {200};
  c.replicates = 150;
  c.t = 0.05;
  const auto r = run_concentration(c);
  CHECK(r.samples.size() == 150);
  CHECK(r.tail.replicates == 150);
  CHECK(r.tail.bound == doctest::Approx(std::exp(-2.0 * 200 * 0.0025 / 2)));
  CHECK(concentration_to_json(r).find("\"exceed_count\"") != std::string::npos);

  ExperimentConfig m;
  m.experiment = ExperimentKind::markov_fourier;
  m.n_grid = {1000};
  m.replicates = 100;
  const auto mr = run_concentration(m);
  CHECK(mr.tail.bound == doctest::Approx(m.bound_target));
  CHECK(mr.tail.t == doctest::Approx(std::sqrt(2 * 0.25 * std::log(1 / 0.05) / (0.25 * 1000))));

  c.n_grid = {100, 200};
  CHECK_THROWS_AS(run_concentration(c), InvalidArgument);
  c.n_grid = {200};
  c.experiment = ExperimentKind::iid_w1_1d;
  CHECK_THROWS_AS(run_concentration(c), InvalidArgument);
}

TEST_CASE("theory table, decomposition and chain diagnostics") {
  const auto table = verify_theory_table();
  CHECK(table.size() == 8);
  for (const auto& row : table) CHECK_MESSAGE(row.passed, row.name);

  const auto d = decompose_demo(12, 3);
  CHECK(d.functions == 12);
  CHECK(d.violations == 0);
  CHECK(d.worst_coefficient_ratio <= 1.0);
  CHECK(d.worst_residual_ratio <= 1.0);

  const auto c = chain_diagnostics(KernelKind::four_corners, 5000, 50, 1);
  REQUIRE(c.contraction.size() == 11);
  for (std::size_t t = 0; t < c.contraction.size(); ++t) {
    CHECK(c.contraction[t] <= c.claimed[t] * (1 + 1e-9));
  }
  CHECK(c.lags == std::vector<int>{1, 2, 4});
}
