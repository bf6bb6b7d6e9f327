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

#include "empdist/theory.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "empdist/concentration.hpp"
#include "empdist/errors.hpp"

namespace empdist {

namespace {

void require_n(double n, double min) {
  if (!(n >= min)) throw InvalidArgument("sample size n must be >= " + std::to_string(min));
}

void require_dim(int d) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
}

}  // namespace

double wq_inf_rhs(double q, int d, double n) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  require_dim(d);
  require_n(n, 2.0);
  const double half_d = 0.5 * d;
  if (std::abs(d - 2.0 * q) < 1e-12) {
    return (2.0 + std::log2(n) / (std::pow(2.0, q + 1.0) * q)) / std::sqrt(n);
  }
  if (d < 2.0 * q) {
    return std::pow(2.0, half_d - 2.0 * q) / (1.0 - std::pow(2.0, half_d - q)) / std::sqrt(n);
  }
  const double h = half_d - q;
  return 2.0 * std::pow(h / (2.0 * q * (1.0 - std::pow(2.0, q - half_d))), 2.0 * q / d) *
         (1.0 + q / (std::pow(2.0, q) * h)) * std::pow(n, -q / d);
}

double c_prime(int d) {
  if (d < 3) throw InvalidArgument("C'_d is defined for d >= 3");
  const double dd = d;
  return 2.0 * std::pow((dd / 2.0 - 1.0) / (2.0 - std::pow(2.0, 2.0 - dd / 2.0)), 2.0 / dd) *
         (1.0 + 1.0 / (dd - 2.0));
}

double w1_euclid_rhs(int d, double n) {
  require_dim(d);
  require_n(n, 2.0);
  if (d == 1) return 1.0 / (2.0 * (std::numbers::sqrt2 - 1.0)) / std::sqrt(n);
  if (d == 2) return (std::log2(n) + 8.0) / std::sqrt(8.0 * n);
  return std::sqrt(static_cast<double>(d)) * wq_inf_rhs(1.0, d, n);
}

double iid_cs_rate(double s, int d, double n, double C) {
  if (!(s >= 1.0)) throw InvalidArgument("regularity s must be >= 1");
  require_dim(d);
  require_n(n, 2.0);
  if (!(C > 0.0)) throw InvalidArgument("constant C must be positive");
  const double half_d = 0.5 * d;
  if (std::abs(s - half_d) < 1e-12) return C * std::log(n) / std::sqrt(n);
  if (s > half_d) return C / std::sqrt(n);
  return C * std::pow(n, -s / d);
}

double markov_cs_rate(double s, int d, double n, double theta, double C) {
  if (!(s >= 1.0)) throw InvalidArgument("regularity s must be >= 1");
  require_dim(d);
  if (!(theta >= 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in [0,1)");
  if (!(C > 0.0)) throw InvalidArgument("constant C must be positive");
  const double nbar = (1.0 - theta) * n;
  if (!(nbar >= 3.0)) throw InvalidArgument("effective sample size (1-theta) n must be >= 3");
  const double L = std::log(nbar);
  const double half_d = 0.5 * d;
  if (std::abs(s - half_d) < 1e-12) return C * L / std::sqrt(nbar);
  if (s > half_d) return C * std::pow(L, d / (2.0 * s + 1.0)) / std::sqrt(nbar);
  return C * std::pow(L, d - 2.0 * s + s / d) * std::pow(nbar, -s / d);
}

double cantor_critical_rhs(double n, int J) {
  require_n(n, 2.0);
  if (J < 1) throw InvalidArgument("depth J must be >= 1");
  return std::numbers::sqrt2 * std::ldexp(1.0, -J) + J * std::sqrt(1.5 / n);
}

double lower_bound_lebesgue(int d, double n, double q, Metric norm) {
  require_dim(d);
  require_n(n, 1.0);
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  const double dd = d;
  if (norm == Metric::euclidean) {
    if (q != 1.0) throw InvalidArgument("the euclidean lower bound is stated for q = 1");
    const double gamma_root = std::exp(std::lgamma(dd / 2.0 + 1.0) / dd);
    return dd * gamma_root / ((dd + 1.0) * std::sqrt(std::numbers::pi)) * std::pow(n, -1.0 / dd);
  }
  return dd / ((dd + q) * std::pow(2.0, q)) * std::pow(n, -q / dd);
}

double binomial_mad_rhs(int n, double p) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
  return std::sqrt(n * p * (1.0 - p));
}

double binomial_mad_exact(int n, double p) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double mean = n * p;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                           k * std::log(p) + (n - k) * std::log1p(-p);
    total += std::exp(log_pmf) * std::abs(k - mean);
  }
  return total;
}

std::string_view to_string(RateFamily f) {
  switch (f) {
    case RateFamily::wq_inf:
      return "wq_inf";
    case RateFamily::w1_euclid:
      return "w1_euclid";
    case RateFamily::iid_cs:
      return "iid_cs";
    case RateFamily::markov_cs:
      return "markov_cs";
    case RateFamily::lower_lebesgue:
      return "lower_lebesgue";
    case RateFamily::binomial_mad:
      return "binomial_mad";
    case RateFamily::tail_iid:
      return "tail_iid";
    case RateFamily::tail_markov:
      return "tail_markov";
  }
  return "?";
}

RateFamily parse_rate_family(std::string_view s) {
  for (auto f : {RateFamily::wq_inf, RateFamily::w1_euclid, RateFamily::iid_cs,
                 RateFamily::markov_cs, RateFamily::lower_lebesgue, RateFamily::binomial_mad,
                 RateFamily::tail_iid, RateFamily::tail_markov}) {
    if (to_string(f) == s) return f;
  }
  throw InvalidArgument("unknown rate family: " + std::string(s));
}

double evaluate(const RateSpec& r) {
  switch (r.family) {
    case RateFamily::wq_inf:
      return wq_inf_rhs(r.q, r.d, r.n);
    case RateFamily::w1_euclid:
      return w1_euclid_rhs(r.d, r.n);
    case RateFamily::iid_cs:
      return iid_cs_rate(r.s, r.d, r.n, r.C);
    case RateFamily::markov_cs:
      return markov_cs_rate(r.s, r.d, r.n, r.theta, r.C);
    case RateFamily::lower_lebesgue:
      return lower_bound_lebesgue(r.d, r.n, r.q, r.norm);
    case RateFamily::binomial_mad:
      return binomial_mad_rhs(static_cast<int>(r.n), r.p);
    case RateFamily::tail_iid:
      return tail_bound_iid(r.t, r.n, r.d);
    case RateFamily::tail_markov:
      return tail_bound_markov(r.t, r.n, r.theta, r.D, r.diameter);
  }
  throw InvalidArgument("unknown rate family");
}

}  // namespace empdist
