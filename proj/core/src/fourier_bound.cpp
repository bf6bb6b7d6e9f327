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

#include "empdist/fourier_bound.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "empdist/compensated.hpp"
#include "empdist/errors.hpp"

namespace empdist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Phase recurrences drift by ~eps per step; re-anchor on an exact exponential
// this often.
constexpr int kReanchor = 128;

std::complex<double> unit_phase(double kx) {
  const double t = kx - std::floor(kx);
  return std::polar(1.0, kTwoPi * t);
}

// Phases e^{2 pi i k x} for k = 0..J.
void phase_row(double x, int J, std::vector<std::complex<double>>& out) {
  out.resize(static_cast<std::size_t>(J) + 1);
  const std::complex<double> z = unit_phase(x);
  out[0] = 1.0;
  for (int k = 1; k <= J; ++k) {
    out[static_cast<std::size_t>(k)] =
        k % kReanchor == 0 ? unit_phase(static_cast<double>(k) * x) : out[static_cast<std::size_t>(k) - 1] * z;
  }
}

// sum_{k=1..J} |D_k|^2 / k^{2s} for d = 1, one frequency at a time with a
// running per-atom phase.
double weighted_sum_1d(const DiscreteMeasure& emp, const ReferenceMeasure& ref, int J, double s) {
  const std::size_t n = emp.size();
  std::vector<std::complex<double>> z(n), cur(n, 1.0);
  for (std::size_t a = 0; a < n; ++a) z[a] = unit_phase(emp.coords()[a]);
  CompensatedSum acc;
  for (int k = 1; k <= J; ++k) {
    CompensatedSum re, im;
    for (std::size_t a = 0; a < n; ++a) {
      cur[a] = k % kReanchor == 0 ? unit_phase(static_cast<double>(k) * emp.coords()[a])
                                  : cur[a] * z[a];
      const double w = emp.weight(a);
      re.add(w * cur[a].real());
      im.add(w * cur[a].imag());
    }
    const std::complex<double> diff =
        std::complex<double>(re.value(), im.value()) - ref.fourier_coefficient({{k}});
    acc.add(std::norm(diff) / std::pow(static_cast<double>(k), 2.0 * s));
  }
  return acc.value();
}

// General d: accumulate every half-space frequency atom by atom, from per-axis
// phase rows (negative frequencies by conjugation).
double weighted_sum_nd(const DiscreteMeasure& emp, const ReferenceMeasure& ref, int J, double s,
                       std::size_t& count) {
  const int d = emp.dim();
  const std::size_t side = 2 * static_cast<std::size_t>(J) + 1;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= side;

  // Frequencies with first nonzero coordinate positive.
  std::vector<std::vector<int>> freqs;
  std::vector<int> k(static_cast<std::size_t>(d));
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rest = lin;
    for (int i = d - 1; i >= 0; --i) {
      k[static_cast<std::size_t>(i)] = static_cast<int>(rest % side) - J;
      rest /= side;
    }
    int first = 0;
    for (int v : k) {
      if (v != 0) {
        first = v;
        break;
      }
    }
    if (first > 0) freqs.push_back(k);
  }
  count = 2 * freqs.size();

  std::vector<CompensatedComplexSum> coef(freqs.size());
  std::vector<std::vector<std::complex<double>>> rows(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < emp.size(); ++a) {
    const auto x = emp.point(a);
    for (int i = 0; i < d; ++i) phase_row(x[static_cast<std::size_t>(i)], J, rows[static_cast<std::size_t>(i)]);
    const double w = emp.weight(a);
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      std::complex<double> p = w;
      for (int i = 0; i < d; ++i) {
        const int ki = freqs[f][static_cast<std::size_t>(i)];
        const auto& r = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(std::abs(ki))];
        p *= ki >= 0 ? r : std::conj(r);
      }
      coef[f].add(p);
    }
  }

  CompensatedSum acc;
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const FrequencyIndex idx{freqs[f]};
    const std::complex<double> diff = coef[f].value() - ref.fourier_coefficient(idx);
    acc.add(std::norm(diff) / std::pow(static_cast<double>(idx.sup_norm()), 2.0 * s));
  }
  return acc.value();
}

}  // namespace

double FourierBoundParams::alpha() const { return 1.0 / std::log(static_cast<double>(J)); }

FourierBoundReport cs_dual_bound(const DiscreteMeasure& emp, const ReferenceMeasure& ref,
                                 const FourierBoundParams& params) {
  if (params.J < 3) throw InvalidArgument("Fourier cutoff J must be >= 3");
  if (!(params.s >= 1.0)) throw InvalidArgument("regularity s must be >= 1");
  if (!(params.c_approx >= 0.0)) throw InvalidArgument("c_approx must be nonnegative");
  if (emp.dim() != ref.dim()) throw InvalidArgument("measure dimensions differ");
  if (!ref.has_fourier()) {
    throw CapabilityMissing("reference measure has no Fourier coefficients");
  }
  const int d = emp.dim();
  FourierBoundReport out;
  out.s = params.s;
  out.J = params.J;
  out.alpha = params.alpha();
  out.approximation_term = params.c_approx * std::pow(std::log(static_cast<double>(params.J)), d) /
                           std::pow(static_cast<double>(params.J), params.s);
  double half = 0.0;
  if (d == 1) {
    half = weighted_sum_1d(emp, ref, params.J, params.s);
    out.frequencies = 2 * static_cast<std::size_t>(params.J);
  } else {
    half = weighted_sum_nd(emp, ref, params.J, params.s, out.frequencies);
  }
  out.stochastic_term = std::sqrt(2.0 * half);
  out.total = out.approximation_term + out.stochastic_term;
  return out;
}

FourierDepth choose_J_fourier(double s, int d, std::size_t n, double theta) {
  if (!(s >= 1.0)) throw InvalidArgument("regularity s must be >= 1");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(theta >= 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in [0,1)");
  const double nbar = (1.0 - theta) * static_cast<double>(n);
  if (nbar < 16.0) throw InvalidArgument("effective sample size (1-theta) n must be >= 16");
  const double L = std::log(nbar);
  const double half_d = 0.5 * d;
  double j = 0.0;
  if (std::abs(s - half_d) < 1e-12) {
    j = std::pow(nbar, 1.0 / (2.0 * s)) * std::pow(L, (d - 1.0) / s);
  } else if (s < half_d) {
    j = std::pow(L, 2.0 - 1.0 / d) * std::pow(nbar, 1.0 / d);
  } else {
    j = std::pow(nbar, 1.0 / (2.0 * s)) * std::pow(L, d / (s + 0.5));
  }
  const int J = std::max(3, static_cast<int>(std::floor(j)));
  return {J, nbar};
}

double holder_constant_ek(const FrequencyIndex& k, double alpha, int d) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0,1]");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  const int m = k.sup_norm();
  if (m == 0) return 0.0;
  return 2.0 * std::pow(std::numbers::pi, alpha) * std::pow(static_cast<double>(d), alpha / 2.0) *
         std::pow(static_cast<double>(m), alpha);
}

CoefficientVariance coefficient_variance_check(const MarkovKernelSpec& kernel,
                                               const FrequencyIndex& k, double alpha,
                                               std::size_t n, int replicates,
                                               const SeedSpec& seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0,1]");
  if (replicates < 1) throw InvalidArgument("at least one replicate is required");
  if (static_cast<int>(k.k.size()) != kernel.dim()) throw InvalidArgument("frequency dimension");
  const double gap = 1.0 - std::pow(kernel.claimed_theta(), alpha);
  if (static_cast<double>(n) < 1.0 / gap) {
    throw InvalidArgument("chain length must be >= 1/(1 - theta^alpha)");
  }
  const auto& stationary = kernel.stationary_ref();
  if (!stationary || !stationary->has_fourier()) {
    throw CapabilityMissing("kernel has no stationary reference with Fourier coefficients");
  }
  const std::complex<double> target = stationary->fourier_coefficient(k);
  CompensatedSum acc;
  for (int r = 0; r < replicates; ++r) {
    const ChainSample chain =
        sample_chain({kernel, n, {}, seed.with(static_cast<std::uint64_t>(r), "coefficient-variance")});
    acc.add(std::norm(fourier_coefficient(chain.empirical, k) - target));
  }
  CoefficientVariance out;
  out.empirical_second_moment = acc.value() / replicates;
  const double m = k.sup_norm();
  out.rhs_shape = std::pow(m, 2.0 * alpha) / (gap * static_cast<double>(n));
  return out;
}

}  // namespace empdist
