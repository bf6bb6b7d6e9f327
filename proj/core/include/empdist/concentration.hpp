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
#include <span>

namespace empdist {

/// McDiarmid for a Lip_1 class on [0,1]^d: exp(-2 n t^2 / d).
double tail_bound_iid(double t, double n, int d);

/// Contracting-chain analogue: exp(-(1-theta)^2 n t^2 / (2 D^2 diam^2)).
double tail_bound_markov(double t, double n, double theta, double D, double diam);

/// Azuma-Hoeffding: exp(-2 t^2 / sum c_k^2).
double azuma_rhs(std::span<const double> increment_ranges, double t);

struct TailCheckResult {
  double t = 0.0;
  double empirical_mean = 0.0;
  std::size_t exceed_count = 0;
  std::size_t replicates = 0;
  double empirical_frequency = 0.0;
  double bound = 0.0;
  /// k95 / R - bound, where k95 is the 95% quantile of Bin(R, bound): the
  /// largest frequency a process meeting the bound exactly would show in 19
  /// runs out of 20.
  double binomial_slack = 0.0;
  bool passed = false;
};

/// Counts samples >= mean + t and compares the frequency with bound + slack.
/// Requires t >= 0, bound in [0,1] and at least 100 samples.
TailCheckResult empirical_tail_check(std::span<const double> samples, double t, double bound);

/// Smallest k with P(Bin(R, p) <= k) >= level.
std::size_t binomial_quantile(std::size_t R, double p, double level);

}  // namespace empdist
