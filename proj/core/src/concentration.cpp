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

#include "empdist/concentration.hpp"

#include <cmath>

#include "empdist/compensated.hpp"
#include "empdist/errors.hpp"

namespace empdist {

double tail_bound_iid(double t, double n, int d) {
  if (!(t >= 0.0)) throw InvalidArgument("threshold t must be >= 0");
  if (!(n >= 1.0)) throw InvalidArgument("n must be >= 1");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  return std::exp(-2.0 * n * t * t / d);
}

double tail_bound_markov(double t, double n, double theta, double D, double diam) {
  if (!(t >= 0.0)) throw InvalidArgument("threshold t must be >= 0");
  if (!(n >= 1.0)) throw InvalidArgument("n must be >= 1");
  if (!(theta >= 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in [0,1)");
  if (!(D >= 1.0)) throw InvalidArgument("D must be >= 1");
  if (!(diam > 0.0)) throw InvalidArgument("diameter must be positive");
  const double g = 1.0 - theta;
  return std::exp(-g * g * n * t * t / (2.0 * D * D * diam * diam));
}

double azuma_rhs(std::span<const double> increment_ranges, double t) {
  if (increment_ranges.empty()) throw InvalidArgument("azuma_rhs needs at least one increment");
  if (!(t >= 0.0)) throw InvalidArgument("threshold t must be >= 0");
  CompensatedSum sq;
  for (double c : increment_ranges) {
    if (!(c > 0.0)) throw InvalidArgument("increment ranges must be positive");
    sq.add(c * c);
  }
  return std::exp(-2.0 * t * t / sq.value());
}

std::size_t binomial_quantile(std::size_t R, double p, double level) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0,1)");
  if (p == 0.0) return 0;
  if (p == 1.0) return R;
  const double n = static_cast<double>(R);
  double cdf = 0.0;
  for (std::size_t k = 0; k <= R; ++k) {
    const double kk = static_cast<double>(k);
    cdf += std::exp(std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) +
                    kk * std::log(p) + (n - kk) * std::log1p(-p));
    if (cdf >= level) return k;
  }
  return R;
}

TailCheckResult empirical_tail_check(std::span<const double> samples, double t, double bound) {
  if (samples.size() < 100) throw InvalidArgument("tail checks need at least 100 replicates");
  if (!(t >= 0.0)) throw InvalidArgument("threshold t must be >= 0");
  if (!(bound >= 0.0 && bound <= 1.0)) throw InvalidArgument("bound must lie in [0,1]");
  TailCheckResult out;
  out.t = t;
  out.replicates = samples.size();
  out.empirical_mean = compensated_total(samples) / static_cast<double>(samples.size());
  const double cut = out.empirical_mean + t;
  for (double x : samples) {
    if (x >= cut) ++out.exceed_count;
  }
  const double R = static_cast<double>(out.replicates);
  out.empirical_frequency = static_cast<double>(out.exceed_count) / R;
  out.bound = bound;
  out.binomial_slack =
      static_cast<double>(binomial_quantile(out.replicates, bound, 0.95)) / R - bound;
  out.passed = out.empirical_frequency <= bound + out.binomial_slack;
  return out;
}

}  // namespace empdist
