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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "empdist/concentration.hpp"
#include "empdist/samplers.hpp"

namespace empdist {

enum class ExperimentKind {
  iid_w1_1d,
  iid_dyadic,
  cantor_critical,
  markov_fourier,
  markov_dyadic,
  concentration,
  verify_theory,
  decompose_demo
};

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment(std::string_view s);

enum class DepthPolicy { paper_rule, fixed };

std::string_view to_string(DepthPolicy p);
DepthPolicy parse_depth_policy(std::string_view s);

enum class KernelKind { inverse_doubling, four_corners };

std::string_view to_string(KernelKind k);
KernelKind parse_kernel(std::string_view s);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::iid_dyadic;
  /// i.i.d. law (iid_* and cantor_critical) and its dimension.
  IidModel model = IidModel::uniform(1);
  /// Chain (markov_*).
  KernelKind kernel = KernelKind::inverse_doubling;
  /// Hoelder exponent for dyadic estimators.
  double q = 1.0;
  /// Regularity for Fourier estimators.
  double s = 1.0;
  std::vector<std::size_t> n_grid;
  int replicates = 1;
  std::uint64_t seed = 0;
  DepthPolicy depth_policy = DepthPolicy::paper_rule;
  int fixed_J = 0;
  double c_approx = 1.0;
  /// Worker threads for replicates; results do not depend on it.
  int jobs = 1;

  /// Optional acceptance checks evaluated on the sweep.
  std::optional<double> slope_min;
  std::optional<double> slope_max;
  /// mean - 2 stderr <= theory_value on every row.
  bool check_theory_dominates = false;

  /// Concentration runs: statistic threshold and tail-bound target.
  double t = 0.05;
  /// For the Markov concentration run, pick t so the bound equals this.
  double bound_target = 0.05;

  /// Throws InvalidArgument when the configuration is unusable.
  void validate() const;
};

struct SweepRow {
  std::size_t n = 0;
  int J = 0;
  int replicates = 0;
  double mean = 0.0;
  double std = 0.0;
  double stderr_ = 0.0;
  double theory_value = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;

  friend bool operator==(const SlopeFit&, const SlopeFit&) = default;
};

struct CheckFlag {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CheckFlag&, const CheckFlag&) = default;
};

struct SweepResult {
  ExperimentConfig config;
  /// Name of the statistic ("w1_exact_1d", "dyadic_wq_bound", "cs_dual_bound").
  std::string estimator;
  std::vector<SweepRow> rows;
  std::optional<SlopeFit> slope_fit;
  /// max over rows of mean / theory_value.
  double min_C = 0.0;
  std::vector<CheckFlag> checks;

  [[nodiscard]] bool all_checks_passed() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
bool operator==(const SweepResult& a, const SweepResult& b);

/// OLS of ln(mean) on ln(n). Throws on fewer than two points or a
/// nonpositive mean.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Smallest C with mean <= C * theory on every row.
double min_constant(const std::vector<SweepRow>& rows);

/// Runs the replicate sweep of one of the five sweep experiments. Replicate r
/// at sample size n draws from the stream (seed, r, "<experiment>/n=<n>").
SweepResult run_sweep(const ExperimentConfig& config);

/// Concentration experiment: R replicates of the experiment's statistic at a
/// single n, then the empirical tail check against the matching bound.
struct ConcentrationResult {
  ExperimentConfig config;
  std::string estimator;
  std::size_t n = 0;
  int J = 0;
  std::vector<double> samples;
  TailCheckResult tail;
};

/// config.experiment selects the statistic: iid_dyadic (W_{q,inf} dyadic
/// bound, tail_bound_iid at config.t) or markov_fourier (Fourier bound on the
/// chain, tail_bound_markov at the t matching config.bound_target).
ConcentrationResult run_concentration(const ExperimentConfig& config);

struct TheoryCheck {
  std::string name;
  double value = 0.0;
  std::string expectation;
  bool passed = false;
};

/// The closed-form anchors: C'_4, C_3, the d=1 constant, the consistency of
/// the euclidean and sup-norm bounds, C'_d -> 2, binomial MAD enumeration.
std::vector<TheoryCheck> verify_theory_table();

struct DecomposeSummary {
  int functions = 0;
  std::size_t coefficients = 0;
  std::size_t violations = 0;
  double worst_coefficient_ratio = 0.0;
  double worst_residual_ratio = 0.0;
};

/// Decomposes `count` random Hoelder functions (d in {1,2}, q in {1/2,1},
/// J in 1..6) and tallies coefficient-bound violations.
DecomposeSummary decompose_demo(int count, std::uint64_t seed);

struct ChainDiagnostics {
  KernelKind kernel;
  /// contraction[t] for t = 0..10 and the claimed D theta^t.
  std::vector<double> contraction;
  std::vector<double> claimed;
  /// Autocorrelation of f(x) = x_0 at lags 1, 2, 4.
  std::vector<int> lags;
  std::vector<double> autocorrelation;
};

ChainDiagnostics chain_diagnostics(KernelKind kernel, std::size_t n, int pairs,
                                   std::uint64_t seed);

/// JSON/CSV serialization. Doubles are written with round-trip precision so
/// parse(emit(x)) == x.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);
std::string sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(std::string_view text);
std::string sweep_to_csv(const SweepResult& result);
std::string concentration_to_json(const ConcentrationResult& result);

/// Writes the CSV and/or JSON files; empty paths are skipped. Throws
/// std::runtime_error naming the path on I/O failure and InvalidArgument on an
/// empty sweep.
void emit_outputs(const SweepResult& result, const std::string& csv_path,
                  const std::string& json_path);

}  // namespace empdist
