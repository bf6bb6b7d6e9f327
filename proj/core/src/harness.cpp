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

#include "empdist/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "empdist/compensated.hpp"
#include "empdist/dyadic_bound.hpp"
#include "empdist/errors.hpp"
#include "empdist/fourier_bound.hpp"
#include "empdist/holder.hpp"
#include "empdist/markov.hpp"
#include "empdist/theory.hpp"
#include "empdist/transport.hpp"
#include "json.hpp"

namespace empdist {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Enum names

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::iid_w1_1d:
      return "iid_w1_1d";
    case ExperimentKind::iid_dyadic:
      return "iid_dyadic";
    case ExperimentKind::cantor_critical:
      return "cantor_critical";
    case ExperimentKind::markov_fourier:
      return "markov_fourier";
    case ExperimentKind::markov_dyadic:
      return "markov_dyadic";
    case ExperimentKind::concentration:
      return "concentration";
    case ExperimentKind::verify_theory:
      return "verify_theory";
    case ExperimentKind::decompose_demo:
      return "decompose_demo";
  }
  return "?";
}

ExperimentKind parse_experiment(std::string_view s) {
  for (auto k : {ExperimentKind::iid_w1_1d, ExperimentKind::iid_dyadic,
                 ExperimentKind::cantor_critical, ExperimentKind::markov_fourier,
                 ExperimentKind::markov_dyadic, ExperimentKind::concentration,
                 ExperimentKind::verify_theory, ExperimentKind::decompose_demo}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown experiment: " + std::string(s));
}

std::string_view to_string(DepthPolicy p) {
  return p == DepthPolicy::paper_rule ? "paper_rule" : "fixed";
}

DepthPolicy parse_depth_policy(std::string_view s) {
  if (s == "paper_rule") return DepthPolicy::paper_rule;
  if (s == "fixed") return DepthPolicy::fixed;
  throw InvalidArgument("unknown depth policy: " + std::string(s));
}

std::string_view to_string(KernelKind k) {
  return k == KernelKind::inverse_doubling ? "inverse_doubling" : "four_corners";
}

KernelKind parse_kernel(std::string_view s) {
  if (s == "inverse_doubling") return KernelKind::inverse_doubling;
  if (s == "four_corners") return KernelKind::four_corners;
  throw InvalidArgument("unknown kernel: " + std::string(s));
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  model.validate();
  if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
  if (depth_policy == DepthPolicy::fixed && fixed_J < 1) {
    throw InvalidArgument("fixed depth policy needs fixed_J >= 1");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw InvalidArgument("every n in the grid must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw InvalidArgument("n_grid must be strictly increasing");
    }
  }
  switch (experiment) {
    case ExperimentKind::iid_w1_1d:
      if (model.kind != IidModel::Kind::uniform_cube || model.dim != 1) {
        throw InvalidArgument("iid_w1_1d needs the uniform model in d = 1");
      }
      break;
    case ExperimentKind::cantor_critical:
      if (model.kind != IidModel::Kind::cantor_ifs) {
        throw InvalidArgument("cantor_critical needs the cantor_ifs model");
      }
      if (q != 0.5) throw InvalidArgument("cantor_critical runs at q = 1/2");
      break;
    case ExperimentKind::markov_fourier:
      if (kernel != KernelKind::inverse_doubling) {
        throw InvalidArgument(
            "markov_fourier needs a kernel whose stationary law has Fourier coefficients");
      }
      break;
    case ExperimentKind::markov_dyadic:
      if (kernel == KernelKind::four_corners && q != 0.5) {
        throw InvalidArgument("markov_dyadic on four_corners runs at q = 1/2");
      }
      break;
    default:
      break;
  }
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  if (!(s >= 1.0)) throw InvalidArgument("s must be >= 1");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  // jobs is an execution detail and deliberately not part of identity.
  return a.experiment == b.experiment && a.model.kind == b.model.kind &&
         a.model.dim == b.model.dim && a.model.cantor_depth == b.model.cantor_depth &&
         a.kernel == b.kernel && a.q == b.q && a.s == b.s && a.n_grid == b.n_grid &&
         a.replicates == b.replicates && a.seed == b.seed && a.depth_policy == b.depth_policy &&
         a.fixed_J == b.fixed_J && a.c_approx == b.c_approx && a.slope_min == b.slope_min &&
         a.slope_max == b.slope_max && a.check_theory_dominates == b.check_theory_dominates &&
         a.t == b.t && a.bound_target == b.bound_target;
}

bool operator==(const SweepResult& a, const SweepResult& b) {
  return a.config == b.config && a.estimator == b.estimator && a.rows == b.rows &&
         a.slope_fit == b.slope_fit && a.min_C == b.min_C && a.checks == b.checks;
}

bool SweepResult::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckFlag& c) { return c.passed; });
}

// ---------------------------------------------------------------------------
// Statistics helpers

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidArgument("a slope fit needs at least two points");
  const double m = static_cast<double>(points.size());
  CompensatedSum sx, sy;
  for (const auto& [n, y] : points) {
    if (!(n > 0.0)) throw InvalidArgument("slope fit needs positive n");
    if (!(y > 0.0)) throw InvalidArgument("slope fit needs positive means");
    sx.add(std::log(n));
    sy.add(std::log(y));
  }
  const double mx = sx.value() / m;
  const double my = sy.value() / m;
  CompensatedSum sxx, sxy, syy;
  for (const auto& [n, y] : points) {
    const double dx = std::log(n) - mx;
    const double dy = std::log(y) - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() <= 0.0) throw InvalidArgument("slope fit needs at least two distinct n");
  SlopeFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  if (syy.value() <= 0.0) {
    fit.r2 = 1.0;
  } else {
    fit.r2 = std::clamp(sxy.value() * sxy.value() / (sxx.value() * syy.value()), 0.0, 1.0);
  }
  return fit;
}

double min_constant(const std::vector<SweepRow>& rows) {
  double c = 0.0;
  for (const auto& r : rows) {
    if (!(r.theory_value > 0.0)) throw InvalidArgument("theory values must be positive");
    c = std::max(c, r.mean / r.theory_value);
  }
  return c;
}

namespace {

struct Moments {
  double mean;
  double std;
};

Moments moments(const std::vector<double>& xs) {
  const double R = static_cast<double>(xs.size());
  const double mean = compensated_total(xs) / R;
  if (xs.size() < 2) return {mean, 0.0};
  CompensatedSum ss;
  for (double x : xs) ss.add((x - mean) * (x - mean));
  return {mean, std::sqrt(ss.value() / (R - 1.0))};
}

// Runs fn(i) for i in [0, count) on `jobs` threads; results land by index.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const auto nworkers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (std::size_t w = 0; w < nworkers; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

MarkovKernelSpec make_kernel(const ExperimentConfig& c) {
  return c.kernel == KernelKind::inverse_doubling ? MarkovKernelSpec::inverse_doubling(c.model.dim)
                                                  : MarkovKernelSpec::four_corners();
}

// Everything needed to evaluate the statistic at one sample size.
struct Plan {
  std::string estimator;
  int J = 0;
  double theory = 0.0;
  std::function<double(const SeedSpec&)> statistic;
};

Plan plan_for(const ExperimentConfig& c, std::size_t n) {
  Plan plan;
  const double nd = static_cast<double>(n);
  auto depth = [&](double q, double d_eff, std::size_t count, int base) {
    return c.depth_policy == DepthPolicy::fixed ? c.fixed_J
                                                : choose_depth(q, d_eff, count, base).J;
  };

  switch (c.experiment) {
    case ExperimentKind::iid_w1_1d: {
      const auto model = c.model;
      const ReferenceMeasure ref = reference_for(model);
      plan.estimator = "w1_exact_1d";
      plan.theory = w1_euclid_rhs(1, nd);
      plan.statistic = [model, ref, n](const SeedSpec& seed) {
        return w1_exact_1d(sample_iid(model, n, seed), ref);
      };
      return plan;
    }
    case ExperimentKind::iid_dyadic: {
      const auto model = c.model;
      const ReferenceMeasure ref = reference_for(model);
      const int J = depth(c.q, model.dim, n, 2);
      const double q = c.q;
      plan.estimator = "dyadic_wq_bound";
      plan.J = J;
      plan.theory = wq_inf_rhs(q, model.dim, nd);
      plan.statistic = [model, ref, n, q, J](const SeedSpec& seed) {
        return dyadic_wq_bound(sample_iid(model, n, seed), ref, q, J, 2, false).total;
      };
      return plan;
    }
    case ExperimentKind::cantor_critical: {
      const auto model = c.model;
      const ReferenceMeasure ref = reference_for(model);
      // The Cantor measure has dimension 1 in base 4 ("d replaced by 1").
      const int J = depth(c.q, 1.0, n, 4);
      const double q = c.q;
      plan.estimator = "dyadic_wq_bound";
      plan.J = J;
      plan.theory = cantor_critical_rhs(nd, J);
      plan.statistic = [model, ref, n, q, J](const SeedSpec& seed) {
        return dyadic_wq_bound(sample_iid(model, n, seed), ref, q, J, 4, true).total;
      };
      return plan;
    }
    case ExperimentKind::markov_fourier: {
      const MarkovKernelSpec kernel = make_kernel(c);
      const int d = kernel.dim();
      const double theta = kernel.claimed_theta();
      FourierBoundParams params;
      params.s = c.s;
      params.c_approx = c.c_approx;
      params.J = c.depth_policy == DepthPolicy::fixed ? c.fixed_J
                                                      : choose_J_fourier(c.s, d, n, theta).J;
      const ReferenceMeasure ref = *kernel.stationary_ref();
      plan.estimator = "cs_dual_bound";
      plan.J = params.J;
      plan.theory = markov_cs_rate(c.s, d, nd, theta);
      plan.statistic = [kernel, ref, params, n](const SeedSpec& seed) {
        const ChainSample chain = sample_chain({kernel, n, {}, seed});
        return cs_dual_bound(chain.empirical, ref, params).total;
      };
      return plan;
    }
    case ExperimentKind::markov_dyadic: {
      const MarkovKernelSpec kernel = make_kernel(c);
      const ReferenceMeasure ref = *kernel.stationary_ref();
      const double nbar = (1.0 - kernel.claimed_theta()) * nd;
      const bool cantor = c.kernel == KernelKind::four_corners;
      const int base = cantor ? 4 : 2;
      const double d_eff = cantor ? 1.0 : kernel.dim();
      const int J = depth(c.q, d_eff, n, base);
      const double q = c.q;
      plan.estimator = "dyadic_wq_bound";
      plan.J = J;
      // i.i.d. expectation bound at the effective sample size (1-theta) n.
      plan.theory = cantor ? cantor_critical_rhs(std::max(2.0, nbar), J)
                           : wq_inf_rhs(q, kernel.dim(), std::max(2.0, nbar));
      plan.statistic = [kernel, ref, n, q, J, base, cantor](const SeedSpec& seed) {
        const ChainSample chain = sample_chain({kernel, n, {}, seed});
        return dyadic_wq_bound(chain.empirical, ref, q, J, base, cantor).total;
      };
      return plan;
    }
    default:
      throw InvalidArgument("experiment " + std::string(to_string(c.experiment)) +
                            " is not a sweep");
  }
}

std::string stream_tag(const ExperimentConfig& c, std::size_t n) {
  return std::string(to_string(c.experiment)) + "/n=" + std::to_string(n);
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.n_grid.empty()) throw InvalidArgument("n_grid is empty");

  std::vector<Plan> plans;
  plans.reserve(config.n_grid.size());
  for (std::size_t n : config.n_grid) plans.push_back(plan_for(config, n));

  const auto R = static_cast<std::size_t>(config.replicates);
  std::vector<double> values(plans.size() * R);
  parallel_for(values.size(), config.jobs, [&](std::size_t task) {
    const std::size_t row = task / R;
    const std::size_t r = task % R;
    const SeedSpec seed{config.seed, r, stream_tag(config, config.n_grid[row])};
    values[task] = plans[row].statistic(seed);
  });

  SweepResult result;
  result.config = config;
  result.estimator = plans.front().estimator;
  std::vector<std::pair<double, double>> points;
  for (std::size_t row = 0; row < plans.size(); ++row) {
    const std::vector<double> xs(values.begin() + static_cast<std::ptrdiff_t>(row * R),
                                 values.begin() + static_cast<std::ptrdiff_t>((row + 1) * R));
    const Moments m = moments(xs);
    SweepRow out;
    out.n = config.n_grid[row];
    out.J = plans[row].J;
    out.replicates = config.replicates;
    out.mean = m.mean;
    out.std = m.std;
    out.stderr_ = m.std / std::sqrt(static_cast<double>(R));
    out.theory_value = plans[row].theory;
    result.rows.push_back(out);
    points.emplace_back(static_cast<double>(out.n), out.mean);
  }
  if (points.size() >= 2) result.slope_fit = fit_loglog_slope(points);
  result.min_C = min_constant(result.rows);

  if (config.slope_min || config.slope_max) {
    CheckFlag flag{"slope_in_range", false, ""};
    const double lo = config.slope_min.value_or(-INFINITY);
    const double hi = config.slope_max.value_or(INFINITY);
    if (result.slope_fit) {
      const double s = result.slope_fit->slope;
      flag.passed = s >= lo && s <= hi;
      flag.detail = "slope " + fmt_double(s) + " vs [" + fmt_double(lo) + ", " + fmt_double(hi) + "]";
    } else {
      flag.detail = "fewer than two rows";
    }
    result.checks.push_back(flag);
  }
  if (config.check_theory_dominates) {
    CheckFlag flag{"mean_minus_2se_le_theory", true, ""};
    for (const auto& r : result.rows) {
      if (r.mean - 2.0 * r.stderr_ > r.theory_value) {
        flag.passed = false;
        flag.detail += "n=" + std::to_string(r.n) + " ";
      }
    }
    if (flag.passed) flag.detail = "all rows";
    result.checks.push_back(flag);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Concentration

ConcentrationResult run_concentration(const ExperimentConfig& config) {
  config.validate();
  if (config.n_grid.size() != 1) throw InvalidArgument("concentration runs take exactly one n");
  const std::size_t n = config.n_grid.front();
  ConcentrationResult out;
  out.config = config;
  out.n = n;

  double t = config.t;
  double bound = 0.0;
  Plan plan;
  if (config.experiment == ExperimentKind::iid_dyadic) {
    plan = plan_for(config, n);
    bound = tail_bound_iid(t, static_cast<double>(n), config.model.dim);
  } else if (config.experiment == ExperimentKind::markov_fourier) {
    plan = plan_for(config, n);
    const MarkovKernelSpec kernel = make_kernel(config);
    const double D = kernel.claimed_D();
    const double diam = kernel.domain().diameter();
    const double g = 1.0 - kernel.claimed_theta();
    if (!(config.bound_target > 0.0 && config.bound_target < 1.0)) {
      throw InvalidArgument("bound_target must lie in (0,1)");
    }
    t = std::sqrt(2.0 * D * D * diam * diam * std::log(1.0 / config.bound_target) /
                  (g * g * static_cast<double>(n)));
    bound = tail_bound_markov(t, static_cast<double>(n), kernel.claimed_theta(), D, diam);
  } else {
    throw InvalidArgument("concentration supports iid_dyadic and markov_fourier statistics");
  }
  out.estimator = plan.estimator;
  out.J = plan.J;

  const auto R = static_cast<std::size_t>(config.replicates);
  out.samples.assign(R, 0.0);
  parallel_for(R, config.jobs, [&](std::size_t r) {
    const SeedSpec seed{config.seed, r, "concentration/" + stream_tag(config, n)};
    out.samples[r] = plan.statistic(seed);
  });
  out.tail = empirical_tail_check(out.samples, t, bound);
  return out;
}

// ---------------------------------------------------------------------------
// Theory table, decomposition demo, chain diagnostics

std::vector<TheoryCheck> verify_theory_table() {
  std::vector<TheoryCheck> out;
  const double c4 = c_prime(4);
  out.push_back({"C'_4", c4, "= 3", std::abs(c4 - 3.0) <= 1e-12});

  const double c3 = std::sqrt(3.0) * c_prime(3);
  out.push_back({"C_3 = sqrt(3) C'_3", c3, "in [6.2, 6.3]", c3 >= 6.2 && c3 <= 6.3});

  const double c1 = w1_euclid_rhs(1, 1.0 * 1.0 + 3.0) * 2.0;  // n = 4: value * sqrt(n)
  out.push_back({"d=1 constant 1/(2(sqrt2-1))", c1, "~ 1.20711", std::abs(c1 - 1.20711) < 5e-6});

  double worst = 0.0;
  for (int d = 3; d <= 64; ++d) {
    for (double n : {16.0, 1000.0, 1e6}) {
      worst = std::max(worst, std::abs(w1_euclid_rhs(d, n) - std::sqrt(d) * wq_inf_rhs(1.0, d, n)));
    }
  }
  out.push_back({"max |w1_euclid_rhs - sqrt(d) wq_inf_rhs(1,d,n)|, d=3..64", worst, "= 0",
                 worst == 0.0});

  double worst_cprime = 0.0;
  for (int d = 3; d <= 64; ++d) {
    worst_cprime = std::max(worst_cprime, std::abs(c_prime(d) * std::pow(1000.0, -1.0 / d) -
                                                   wq_inf_rhs(1.0, d, 1000.0)));
  }
  out.push_back({"max |C'_d n^{-1/d} - wq_inf_rhs(1,d,n)|, d=3..64", worst_cprime, "<= 1e-12",
                 worst_cprime <= 1e-12});

  const double c_large = c_prime(10000);
  out.push_back({"C'_d at d = 10^4", c_large, "-> 2", std::abs(c_large - 2.0) < 0.01});

  std::size_t violations = 0;
  for (int n = 1; n <= 30; ++n) {
    for (int pi = 1; pi <= 19; ++pi) {
      const double p = 0.05 * pi;
      if (binomial_mad_exact(n, p) > binomial_mad_rhs(n, p) * (1.0 + 1e-12)) ++violations;
    }
  }
  out.push_back({"binomial MAD violations, n <= 30", static_cast<double>(violations), "= 0",
                 violations == 0});

  const double lb1 = lower_bound_lebesgue(1, 1.0, 1.0, Metric::euclidean);
  out.push_back({"euclidean lower-bound prefactor, d = 1", lb1, "= 1/4",
                 std::abs(lb1 - 0.25) < 1e-15});
  return out;
}

DecomposeSummary decompose_demo(int count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("count must be >= 1");
  DecomposeSummary out;
  const SeedSpec base{seed, 0, "holder"};
  for (int i = 0; i < count; ++i) {
    Rng rng(base.with(static_cast<std::uint64_t>(i), "holder"));
    const int d = 1 + i % 2;
    const double q = (i / 2) % 2 == 0 ? 1.0 : 0.5;
    const int J = 1 + (i / 4) % 6;
    const ScalarField f = random_holder_function(d, q, rng);
    const HolderDecomposition dec = holder_decompose(f, d, q, J, J + 2);
    ++out.functions;
    out.violations += dec.violations;
    for (int j = 1; j <= J; ++j) {
      const double bound = std::pow(2.0, -(j + 1) * q);
      for (double a : dec.coefficients[static_cast<std::size_t>(j - 1)]) {
        ++out.coefficients;
        out.worst_coefficient_ratio = std::max(out.worst_coefficient_ratio, std::abs(a) / bound);
      }
    }
    out.worst_residual_ratio =
        std::max(out.worst_residual_ratio, dec.max_residual / dec.remainder_bound);
  }
  return out;
}

ChainDiagnostics chain_diagnostics(KernelKind kind, std::size_t n, int pairs, std::uint64_t seed) {
  ExperimentConfig c;
  c.kernel = kind;
  const MarkovKernelSpec kernel = make_kernel(c);
  ChainDiagnostics out{kind, {}, {}, {1, 2, 4}, {}};
  for (int t = 0; t <= 10; ++t) {
    out.contraction.push_back(estimate_contraction(
        kernel, t, pairs, SeedSpec{seed, static_cast<std::uint64_t>(t), "contraction"}));
    out.claimed.push_back(kernel.claimed_D() * std::pow(kernel.claimed_theta(), t));
  }
  const auto first_coord = [](std::span<const double> x) { return x[0]; };
  for (int lag : out.lags) {
    out.autocorrelation.push_back(estimate_autocorrelation(
        kernel, first_coord, lag, n, SeedSpec{seed, 0, "autocorrelation"}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["model"] = std::string(to_string(c.model.kind));
  j["dim"] = c.model.dim;
  j["cantor_depth"] = c.model.cantor_depth;
  j["kernel"] = std::string(to_string(c.kernel));
  j["q"] = c.q;
  j["s"] = c.s;
  j["n_grid"] = c.n_grid;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  j["depth_policy"] = std::string(to_string(c.depth_policy));
  j["fixed_J"] = c.fixed_J;
  j["c_approx"] = c.c_approx;
  j["slope_min"] = c.slope_min ? json(*c.slope_min) : json(nullptr);
  j["slope_max"] = c.slope_max ? json(*c.slope_max) : json(nullptr);
  j["check_theory_dominates"] = c.check_theory_dominates;
  j["t"] = c.t;
  j["bound_target"] = c.bound_target;
  return j;
}

ExperimentConfig config_of(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig c;
  static const char* const known[] = {
      "experiment", "model", "dim",        "cantor_depth", "kernel",
      "q",          "s",     "n_grid",     "replicates",   "seed",
      "depth_policy", "fixed_J", "c_approx", "slope_min",  "slope_max",
      "check_theory_dominates", "t", "bound_target", "jobs", "out_csv", "out_json"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw InvalidArgument("unknown config key: " + key);
    }
  }
  try {
    if (j.contains("experiment")) c.experiment = parse_experiment(j["experiment"].get<std::string>());
    if (j.contains("model")) c.model.kind = parse_iid_kind(j["model"].get<std::string>());
    if (j.contains("dim")) c.model.dim = j["dim"].get<int>();
    if (j.contains("cantor_depth")) c.model.cantor_depth = j["cantor_depth"].get<int>();
    if (j.contains("kernel")) c.kernel = parse_kernel(j["kernel"].get<std::string>());
    if (j.contains("q")) c.q = j["q"].get<double>();
    if (j.contains("s")) c.s = j["s"].get<double>();
    if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<std::vector<std::size_t>>();
    if (j.contains("replicates")) c.replicates = j["replicates"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("depth_policy")) {
      c.depth_policy = parse_depth_policy(j["depth_policy"].get<std::string>());
    }
    if (j.contains("fixed_J")) c.fixed_J = j["fixed_J"].get<int>();
    if (j.contains("c_approx")) c.c_approx = j["c_approx"].get<double>();
    if (j.contains("slope_min") && !j["slope_min"].is_null()) c.slope_min = j["slope_min"].get<double>();
    if (j.contains("slope_max") && !j["slope_max"].is_null()) c.slope_max = j["slope_max"].get<double>();
    if (j.contains("check_theory_dominates")) {
      c.check_theory_dominates = j["check_theory_dominates"].get<bool>();
    }
    if (j.contains("t")) c.t = j["t"].get<double>();
    if (j.contains("bound_target")) c.bound_target = j["bound_target"].get<double>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return c;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("invalid JSON: ") + e.what());
  }
}

std::string q_or_s(const SweepResult& r) {
  const bool fourier = r.config.experiment == ExperimentKind::markov_fourier;
  return fmt_double(fourier ? r.config.s : r.config.q);
}

int result_dim(const SweepResult& r) {
  switch (r.config.experiment) {
    case ExperimentKind::markov_fourier:
    case ExperimentKind::markov_dyadic:
      return r.config.kernel == KernelKind::four_corners ? 2 : r.config.model.dim;
    default:
      return r.config.model.dim;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << content;
  os.flush();
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

ExperimentConfig config_from_json(std::string_view text) { return config_of(parse_json(text)); }

std::string sweep_to_json(const SweepResult& r) {
  json j;
  j["config"] = config_json(r.config);
  j["estimator"] = r.estimator;
  j["dim"] = result_dim(r);
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"J", row.J},
                    {"replicates", row.replicates},
                    {"mean", row.mean},
                    {"std", row.std},
                    {"stderr", row.stderr_},
                    {"theory_value", row.theory_value}});
  }
  j["rows"] = rows;
  if (r.slope_fit) {
    j["slope_fit"] = {{"slope", r.slope_fit->slope},
                      {"intercept", r.slope_fit->intercept},
                      {"r2", r.slope_fit->r2}};
  } else {
    j["slope_fit"] = nullptr;
  }
  j["min_C"] = r.min_C;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  return j.dump(2);
}

SweepResult sweep_from_json(std::string_view text) {
  const json j = parse_json(text);
  SweepResult r;
  try {
    r.config = config_of(j.at("config"));
    r.estimator = j.at("estimator").get<std::string>();
    for (const auto& row : j.at("rows")) {
      SweepRow out;
      out.n = row.at("n").get<std::size_t>();
      out.J = row.at("J").get<int>();
      out.replicates = row.at("replicates").get<int>();
      out.mean = row.at("mean").get<double>();
      out.std = row.at("std").get<double>();
      out.stderr_ = row.at("stderr").get<double>();
      out.theory_value = row.at("theory_value").get<double>();
      r.rows.push_back(out);
    }
    if (!j.at("slope_fit").is_null()) {
      const auto& f = j.at("slope_fit");
      r.slope_fit = SlopeFit{f.at("slope").get<double>(), f.at("intercept").get<double>(),
                             f.at("r2").get<double>()};
    }
    r.min_C = j.at("min_C").get<double>();
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                          c.at("detail").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed sweep JSON: ") + e.what());
  }
  return r;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "experiment,estimator,d,q_or_s,n,J,replicates,mean,std,stderr,theory_value\n";
  const std::string exp(to_string(r.config.experiment));
  const std::string qs = q_or_s(r);
  const int d = result_dim(r);
  for (const auto& row : r.rows) {
    os << exp << ',' << r.estimator << ',' << d << ',' << qs << ',' << row.n << ',' << row.J
       << ',' << row.replicates << ',' << fmt_double(row.mean) << ',' << fmt_double(row.std)
       << ',' << fmt_double(row.stderr_) << ',' << fmt_double(row.theory_value) << '\n';
  }
  return os.str();
}

std::string concentration_to_json(const ConcentrationResult& r) {
  json j;
  j["config"] = config_json(r.config);
  j["estimator"] = r.estimator;
  j["n"] = r.n;
  j["J"] = r.J;
  j["tail"] = {{"t", r.tail.t},
               {"empirical_mean", r.tail.empirical_mean},
               {"exceed_count", r.tail.exceed_count},
               {"replicates", r.tail.replicates},
               {"empirical_frequency", r.tail.empirical_frequency},
               {"bound", r.tail.bound},
               {"binomial_slack", r.tail.binomial_slack},
               {"passed", r.tail.passed}};
  return j.dump(2);
}

void emit_outputs(const SweepResult& result, const std::string& csv_path,
                  const std::string& json_path) {
  if (result.rows.empty()) throw InvalidArgument("refusing to emit an empty sweep");
  if (!csv_path.empty()) write_file(csv_path, sweep_to_csv(result));
  if (!json_path.empty()) write_file(json_path, sweep_to_json(result));
}

}  // namespace empdist
