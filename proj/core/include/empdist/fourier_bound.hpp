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

#include "empdist/discrete_measure.hpp"
#include "empdist/markov.hpp"
#include "empdist/reference_measure.hpp"
#include "empdist/rng.hpp"

namespace empdist {

struct FourierBoundParams {
  /// Regularity of the test class C^s.
  double s = 1.0;
  /// Frequency cutoff, |k|_inf <= J. Must be >= 3.
  int J = 3;
  /// Unknown constant in front of the approximation term.
  double c_approx = 1.0;

  /// 1 / ln J, the Hoelder exponent the analysis runs with.
  [[nodiscard]] double alpha() const;
};

struct FourierBoundReport {
  double s = 1.0;
  int J = 3;
  double alpha = 0.0;
  /// c_approx (ln J)^d / J^s
  double approximation_term = 0.0;
  /// sqrt(sum_{0 < |k|_inf <= J} |emp(e_k) - ref(e_k)|^2 / |k|_inf^{2s})
  double stochastic_term = 0.0;
  double total = 0.0;
  /// Number of nonzero frequencies summed.
  std::size_t frequencies = 0;
};

/// Fourier-truncation bound on the C^s dual distance between emp and ref.
/// The sum runs over a half-space of frequencies and doubles it, since both
/// measures are real. Throws CapabilityMissing without Fourier coefficients.
FourierBoundReport cs_dual_bound(const DiscreteMeasure& emp, const ReferenceMeasure& ref,
                                 const FourierBoundParams& params);

struct FourierDepth {
  int J = 3;
  /// (1 - theta) n
  double nbar = 0.0;
};

/// Case-dependent cutoff with natural logs, L = ln nbar:
///   s < d/2: floor(L^{2-1/d} nbar^{1/d})
///   s = d/2: floor(nbar^{1/(2s)} L^{(d-1)/s})
///   s > d/2: floor(nbar^{1/(2s)} L^{d/(s+1/2)})
/// Requires nbar >= 16.
FourierDepth choose_J_fourier(double s, int d, std::size_t n, double theta);

/// 2 pi^alpha d^{alpha/2} |k|_inf^alpha, the alpha-Hoelder constant bound of e_k.
double holder_constant_ek(const FrequencyIndex& k, double alpha, int d);

struct CoefficientVariance {
  /// Mean over replicates of |emp_n(e_k) - ref(e_k)|^2.
  double empirical_second_moment = 0.0;
  /// |k|_inf^{2 alpha} / ((1 - theta^alpha) n)
  double rhs_shape = 0.0;
};

/// Runs `replicates` independent chains of length n from the origin and
/// averages the squared coefficient error against the stationary law.
/// Requires n >= 1 / (1 - theta^alpha).
CoefficientVariance coefficient_variance_check(const MarkovKernelSpec& kernel,
                                               const FrequencyIndex& k, double alpha,
                                               std::size_t n, int replicates,
                                               const SeedSpec& seed);

}  // namespace empdist
