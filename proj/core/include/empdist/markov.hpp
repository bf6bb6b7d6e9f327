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

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "empdist/discrete_measure.hpp"
#include "empdist/domain.hpp"
#include "empdist/reference_measure.hpp"
#include "empdist/rng.hpp"

namespace empdist {

/// Homothety x -> ratio * x + translation.
struct AffineMap {
  double ratio = 0.5;
  std::vector<double> translation;
};

/// One-step transition rule with its claimed W1 contraction constants
/// (W1(m_x^t, m_y^t) <= D theta^t |x - y|).
class MarkovKernelSpec {
 public:
  enum class Kind { ifs_random_walk, inverse_doubling };

  /// Random composition of homotheties chosen with the given probabilities.
  /// claimed_theta is max ratio and claimed_D is 1.
  static MarkovKernelSpec ifs_random_walk(std::vector<AffineMap> maps,
                                          std::vector<double> probabilities,
                                          std::optional<ReferenceMeasure> stationary = {});

  /// The four corner maps of ratio 1/4 with equal weights; stationary law is
  /// the four-corners Cantor measure.
  static MarkovKernelSpec four_corners();

  /// X' = (X + B)/2 mod 1 per coordinate, B uniform in {0,1}, on the torus.
  /// theta = 1/2, D = 1, stationary law uniform.
  static MarkovKernelSpec inverse_doubling(int dim = 1);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return domain_.dim(); }
  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] double claimed_D() const { return claimed_D_; }
  [[nodiscard]] double claimed_theta() const { return claimed_theta_; }
  [[nodiscard]] const std::vector<AffineMap>& maps() const { return maps_; }
  [[nodiscard]] const std::vector<double>& probabilities() const { return probabilities_; }
  [[nodiscard]] const std::optional<ReferenceMeasure>& stationary_ref() const {
    return stationary_;
  }

  /// Advances `x` in place by one kernel draw.
  void step(std::span<double> x, Rng& rng) const;

  /// Advances two copies with shared randomness (synchronous coupling). On the
  /// torus, y is first lifted to the representative nearest x so the shared
  /// branch contracts the true torus distance.
  void coupled_step(std::span<double> x, std::span<double> y, Rng& rng) const;

  /// The same coupling written in terms of x and the displacement y - x (on
  /// the torus, its representative in [-1/2, 1/2]). Consumes the same
  /// randomness as coupled_step. Under a shared branch the displacement is
  /// only rescaled, so tracking it directly avoids the cancellation in
  /// y - x once the copies are close.
  void coupled_step_displacement(std::span<double> x, std::span<double> delta, Rng& rng) const;

 private:
  MarkovKernelSpec(Kind kind, Domain domain, double D, double theta);

  Kind kind_;
  Domain domain_;
  double claimed_D_;
  double claimed_theta_;
  std::vector<AffineMap> maps_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
  std::optional<ReferenceMeasure> stationary_;

  [[nodiscard]] std::size_t pick_map(Rng& rng) const;
};

std::string_view to_string(MarkovKernelSpec::Kind kind);

struct ChainRun {
  MarkovKernelSpec kernel;
  std::size_t n = 1;
  /// X_0; empty means the origin.
  std::vector<double> start;
  SeedSpec seed;
};

struct ChainSample {
  /// X_0 .. X_n, row-major.
  std::vector<double> trajectory;
  /// Equal-weight measure on X_1 .. X_n.
  DiscreteMeasure empirical;
};

ChainSample sample_chain(const ChainRun& run);

/// max over random start pairs of d(X_t, Y_t) / d(x, y) under the
/// synchronous coupling; degenerate pairs x = y are skipped.
double estimate_contraction(const MarkovKernelSpec& kernel, int t, int pairs,
                            const SeedSpec& seed);

/// Same, over caller-supplied start pairs (xs[p], ys[p]). Throws when every
/// pair is degenerate.
double estimate_contraction(const MarkovKernelSpec& kernel, int t,
                            std::span<const std::vector<double>> xs,
                            std::span<const std::vector<double>> ys, const SeedSpec& seed);

/// |mean f(X_m) f(X_{m+lag}) - mean f(X_m) * mean f(X_{m+lag})| along one
/// trajectory of length n started at the origin.
double estimate_autocorrelation(const MarkovKernelSpec& kernel,
                                const std::function<double(std::span<const double>)>& observable,
                                int lag, std::size_t n, const SeedSpec& seed);

}  // namespace empdist
