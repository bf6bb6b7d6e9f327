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
#include <vector>

#include "empdist/discrete_measure.hpp"
#include "empdist/reference_measure.hpp"

namespace empdist {

struct DepthTerm {
  int j = 0;
  /// sum over depth-j cells of |emp(C) - ref(C)|
  double discrepancy_sum = 0.0;
  /// Sup-norm bound on the depth-j coefficients, ((b-1)/2 * b^-j)^q.
  double coefficient_bound = 0.0;
  double weighted_term = 0.0;
};

struct DyadicBoundReport {
  double q = 1.0;
  int J = 0;
  int base = 2;
  /// Twice the remainder bound, 2 * (b^-J / 2)^q.
  double truncation_term = 0.0;
  std::vector<DepthTerm> per_depth;
  double total = 0.0;
};

/// Multiscale upper bound on W_{q,inf}(emp, ref):
///   2 (b^-J/2)^q + sum_{j=1..J} ((b-1)/2 b^-j)^q sum_C |emp(C) - ref(C)|.
/// In base 2 the weights are 2^{-(j+1)q} and the truncation 2^{1-(J+1)q}.
///
/// Only cells holding atoms are enumerated; the mass of the reference on the
/// remaining cells is recovered as one minus the mass on the occupied ones.
/// With restrict_to_support the support cells of the reference are merged in
/// instead, which needs a support oracle.
DyadicBoundReport dyadic_wq_bound(const DiscreteMeasure& emp, const ReferenceMeasure& ref,
                                  double q, int J, int base = 2,
                                  bool restrict_to_support = false);

enum class DepthRegime { small, critical, large };

std::string_view to_string(DepthRegime r);

struct DepthChoice {
  int J = 1;
  DepthRegime regime = DepthRegime::small;
};

/// Depth minimizing the bound's expectation for n samples in effective
/// dimension d. small (d < 2q): ceil(log_b n / q); critical (d = 2q):
/// floor(log_b n / (2q)); large (d > 2q, base 2 only): the J with
/// 2^J in [A/2, A], A = n^{1/d} (2q(1 - 2^{q-d/2}) / (d/2 - q))^{2/d}.
DepthChoice choose_depth(double q, double d, std::size_t n, int base = 2);

}  // namespace empdist
