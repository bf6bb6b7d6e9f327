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

#include "empdist/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "empdist/compensated.hpp"
#include "empdist/errors.hpp"

namespace empdist {

namespace {

double wrap_unit(double v) {
  double w = v - std::floor(v);
  if (w >= 1.0) w = 0.0;
  return w;
}

}  // namespace

MarkovKernelSpec::MarkovKernelSpec(Kind kind, Domain domain, double D, double theta)
    : kind_(kind), domain_(domain), claimed_D_(D), claimed_theta_(theta) {}

MarkovKernelSpec MarkovKernelSpec::ifs_random_walk(std::vector<AffineMap> maps,
                                                   std::vector<double> probabilities,
                                                   std::optional<ReferenceMeasure> stationary) {
  if (maps.empty()) throw InvalidArgument("an IFS needs at least one map");
  if (maps.size() != probabilities.size()) {
    throw InvalidArgument("one probability per IFS map is required");
  }
  const auto d = maps.front().translation.size();
  if (d == 0) throw InvalidArgument("IFS translations need at least one coordinate");
  double theta = 0.0;
  CompensatedSum total;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& m = maps[i];
    if (m.translation.size() != d) throw InvalidArgument("IFS translations differ in dimension");
    if (!(m.ratio > 0.0 && m.ratio < 1.0)) throw InvalidArgument("IFS ratios must lie in (0,1)");
    // The image of [0,1)^d must stay inside [0,1)^d.
    for (double t : m.translation) {
      if (t < 0.0 || t + m.ratio > 1.0) throw InvalidArgument("IFS map leaves the unit cube");
    }
    if (!(probabilities[i] > 0.0)) throw InvalidArgument("IFS probabilities must be positive");
    total.add(probabilities[i]);
    theta = std::max(theta, m.ratio);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw InvalidArgument("IFS probabilities must sum to 1");
  }
  if (stationary && stationary->dim() != static_cast<int>(d)) {
    throw InvalidArgument("stationary reference dimension differs from the kernel");
  }
  MarkovKernelSpec k(Kind::ifs_random_walk, Domain::cube(static_cast<int>(d), Metric::supremum),
                     1.0, theta);
  k.maps_ = std::move(maps);
  k.probabilities_ = std::move(probabilities);
  double acc = 0.0;
  for (double p : k.probabilities_) {
    acc += p;
    k.cumulative_.push_back(acc);
  }
  k.cumulative_.back() = 1.0;
  k.stationary_ = std::move(stationary);
  return k;
}

MarkovKernelSpec MarkovKernelSpec::four_corners() {
  std::vector<AffineMap> maps{
      {0.25, {0.0, 0.0}}, {0.25, {0.0, 0.75}}, {0.25, {0.75, 0.75}}, {0.25, {0.75, 0.0}}};
  return ifs_random_walk(std::move(maps), {0.25, 0.25, 0.25, 0.25},
                         ReferenceMeasure::four_corners_cantor());
}

MarkovKernelSpec MarkovKernelSpec::inverse_doubling(int dim) {
  const Domain torus = Domain::torus(dim, Metric::supremum);
  MarkovKernelSpec k(Kind::inverse_doubling, torus, 1.0, 0.5);
  k.stationary_ = ReferenceMeasure::uniform(torus);
  return k;
}

std::size_t MarkovKernelSpec::pick_map(Rng& rng) const {
  if (maps_.size() == 1) return 0;
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), maps_.size() - 1);
}

void MarkovKernelSpec::step(std::span<double> x, Rng& rng) const {
  if (kind_ == Kind::inverse_doubling) {
    std::uint64_t bits = rng.bits();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0 && i % 64 == 0) bits = rng.bits();
      const double b = static_cast<double>((bits >> (i % 64)) & 1U);
      x[i] = wrap_unit((x[i] + b) * 0.5);
    }
    return;
  }
  const auto& m = maps_[pick_map(rng)];
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = m.ratio * x[i] + m.translation[i];
}

void MarkovKernelSpec::coupled_step(std::span<double> x, std::span<double> y, Rng& rng) const {
  if (kind_ == Kind::inverse_doubling) {
    std::uint64_t bits = rng.bits();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0 && i % 64 == 0) bits = rng.bits();
      const double b = static_cast<double>((bits >> (i % 64)) & 1U);
      double lifted = y[i];
      if (lifted - x[i] > 0.5) lifted -= 1.0;
      if (lifted - x[i] < -0.5) lifted += 1.0;
      x[i] = wrap_unit((x[i] + b) * 0.5);
      y[i] = wrap_unit((lifted + b) * 0.5);
    }
    return;
  }
  const auto& m = maps_[pick_map(rng)];
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = m.ratio * x[i] + m.translation[i];
    y[i] = m.ratio * y[i] + m.translation[i];
  }
}

void MarkovKernelSpec::coupled_step_displacement(std::span<double> x, std::span<double> delta,
                                                 Rng& rng) const {
  if (kind_ == Kind::inverse_doubling) {
    std::uint64_t bits = rng.bits();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0 && i % 64 == 0) bits = rng.bits();
      const double b = static_cast<double>((bits >> (i % 64)) & 1U);
      delta[i] = 0.5 * (delta[i] - std::round(delta[i]));
      x[i] = wrap_unit((x[i] + b) * 0.5);
    }
    return;
  }
  const auto& m = maps_[pick_map(rng)];
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = m.ratio * x[i] + m.translation[i];
    delta[i] *= m.ratio;
  }
}

std::string_view to_string(MarkovKernelSpec::Kind kind) {
  return kind == MarkovKernelSpec::Kind::inverse_doubling ? "inverse_doubling" : "ifs_random_walk";
}

ChainSample sample_chain(const ChainRun& run) {
  if (run.n < 1) throw InvalidArgument("chain length must be >= 1");
  const auto d = static_cast<std::size_t>(run.kernel.dim());
  std::vector<double> x = run.start.empty() ? std::vector<double>(d, 0.0) : run.start;
  if (x.size() != d) throw InvalidArgument("chain start has the wrong dimension");
  for (double c : x) {
    if (!(c >= 0.0 && c < 1.0)) throw InvalidArgument("chain start outside [0,1)^d");
  }
  Rng rng(run.seed);
  std::vector<double> traj;
  traj.reserve((run.n + 1) * d);
  traj.insert(traj.end(), x.begin(), x.end());
  for (std::size_t k = 0; k < run.n; ++k) {
    run.kernel.step(x, rng);
    traj.insert(traj.end(), x.begin(), x.end());
  }
  std::vector<double> visited(traj.begin() + static_cast<std::ptrdiff_t>(d), traj.end());
  return {std::move(traj), DiscreteMeasure::empirical(static_cast<int>(d), std::move(visited))};
}

namespace {

double contraction_over_pairs(const MarkovKernelSpec& kernel, int t,
                              std::span<const std::vector<double>> xs,
                              std::span<const std::vector<double>> ys, Rng& rng) {
  double worst = 0.0;
  bool any = false;
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const double d0 = kernel.domain().distance(xs[p], ys[p]);
    if (d0 == 0.0) continue;
    any = true;
    std::vector<double> x = xs[p];
    std::vector<double> delta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) delta[i] = ys[p][i] - x[i];
    for (int s = 0; s < t; ++s) kernel.coupled_step_displacement(x, delta, rng);
    const std::vector<double> origin(x.size(), 0.0);
    worst = std::max(worst, kernel.domain().distance(origin, delta) / d0);
  }
  if (!any) throw InvalidArgument("every start pair is degenerate (x = y)");
  return worst;
}

}  // namespace

double estimate_contraction(const MarkovKernelSpec& kernel, int t, int pairs,
                            const SeedSpec& seed) {
  if (t < 0) throw InvalidArgument("contraction horizon must be >= 0");
  if (pairs < 1) throw InvalidArgument("at least one start pair is required");
  Rng rng(seed);
  const auto d = static_cast<std::size_t>(kernel.dim());
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(pairs), std::vector<double>(d));
  std::vector<std::vector<double>> ys = xs;
  for (int p = 0; p < pairs; ++p) {
    for (std::size_t i = 0; i < d; ++i) {
      xs[p][i] = rng.uniform();
      ys[p][i] = rng.uniform();
    }
  }
  return contraction_over_pairs(kernel, t, xs, ys, rng);
}

double estimate_contraction(const MarkovKernelSpec& kernel, int t,
                            std::span<const std::vector<double>> xs,
                            std::span<const std::vector<double>> ys, const SeedSpec& seed) {
  if (t < 0) throw InvalidArgument("contraction horizon must be >= 0");
  if (xs.empty() || xs.size() != ys.size()) {
    throw InvalidArgument("start pairs must be non-empty and matched");
  }
  Rng rng(seed);
  return contraction_over_pairs(kernel, t, xs, ys, rng);
}

double estimate_autocorrelation(const MarkovKernelSpec& kernel,
                                const std::function<double(std::span<const double>)>& observable,
                                int lag, std::size_t n, const SeedSpec& seed) {
  if (lag < 0) throw InvalidArgument("lag must be >= 0");
  if (n <= 2 * static_cast<std::size_t>(lag)) throw InvalidArgument("need n > 2 * lag");
  const ChainSample chain = sample_chain({kernel, n, {}, seed});
  const auto d = static_cast<std::size_t>(kernel.dim());
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = observable(std::span<const double>(chain.trajectory.data() + (k + 1) * d, d));
  }
  const std::size_t m = n - static_cast<std::size_t>(lag);
  CompensatedSum head;
  CompensatedSum tail;
  CompensatedSum cross;
  for (std::size_t k = 0; k < m; ++k) {
    head.add(f[k]);
    tail.add(f[k + lag]);
    cross.add(f[k] * f[k + lag]);
  }
  const double inv = 1.0 / static_cast<double>(m);
  return std::abs(cross.value() * inv - (head.value() * inv) * (tail.value() * inv));
}

}  // namespace empdist
