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

#include <cstddef>
#include <string_view>

#include "empdist/domain.hpp"

namespace empdist {

/// Right-hand side of E W_{q,inf}(emp_n, mu) <= ... for any mu on [0,1]^d,
/// in the small (d < 2q), critical (d = 2q) and large (d > 2q) regimes.
double wq_inf_rhs(double q, int d, double n);

/// C'_d = 2 ((d/2-1)/(2-2^{2-d/2}))^{2/d} (1 + 1/(d-2)) for d >= 3.
double c_prime(int d);

/// Euclidean W1 bound: n^{-1/2}/(2(sqrt2-1)) for d=1, (log2 n + 8)/sqrt(8n)
/// for d=2, sqrt(d) wq_inf_rhs(1, d, n) for d >= 3.
double w1_euclid_rhs(int d, double n);

/// C n^{-1/2}, C ln(n) n^{-1/2} or C n^{-s/d} for s >, =, < d/2.
double iid_cs_rate(double s, int d, double n, double C = 1.0);

/// Markov-chain C^s rate in nbar = (1 - theta) n.
double markov_cs_rate(double s, int d, double n, double theta, double C = 1.0);

/// Expectation bound of the restricted base-4 dyadic estimator (q = 1/2) for
/// i.i.d. samples of the four-corners Cantor measure at depth J: each depth
/// contributes sqrt(3/2)/sqrt(n) and the truncation is sqrt(2) 2^-J.
double cantor_critical_rhs(double n, int J);

/// Lower bound on W1 between Lebesgue measure and any n-point measure
/// (euclidean, q = 1), or between Lebesgue measure and the best n-point grid
/// (supremum norm, W_{q,inf}).
double lower_bound_lebesgue(int d, double n, double q, Metric norm);

/// sqrt(n p (1-p)), bounding E|Bin(n,p) - np|.
double binomial_mad_rhs(int n, double p);

/// E|Bin(n,p) - np| by enumerating the pmf.
double binomial_mad_exact(int n, double p);

enum class RateFamily {
  wq_inf,
  w1_euclid,
  iid_cs,
  markov_cs,
  lower_lebesgue,
  binomial_mad,
  tail_iid,
  tail_markov
};

std::string_view to_string(RateFamily f);
RateFamily parse_rate_family(std::string_view s);

/// One evaluator call with its parameters; fields a family does not use are
/// ignored.
struct RateSpec {
  RateFamily family = RateFamily::wq_inf;
  double q = 1.0;
  double s = 1.0;
  int d = 1;
  double n = 2.0;
  double theta = 0.5;
  double D = 1.0;
  double diameter = 1.0;
  double C = 1.0;
  double t = 0.0;
  double p = 0.5;
  Metric norm = Metric::supremum;
};

double evaluate(const RateSpec& spec);

}  // namespace empdist
