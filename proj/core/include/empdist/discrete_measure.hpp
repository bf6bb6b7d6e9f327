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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace empdist {

class DyadicCell;
struct FrequencyIndex;

/// Finitely many weighted atoms in [0,1)^d. Coordinates are stored row-major
/// (atom i occupies coords[i*d .. i*d+d)).
class DiscreteMeasure {
 public:
  /// Validates that weights lie in (0,1], sum to 1 within 1e-12 and that every
  /// coordinate lies in [0,1).
  DiscreteMeasure(int dim, std::vector<double> coords, std::vector<double> weights);

  /// Equal-weight measure (1/n per atom) built from n sample points.
  static DiscreteMeasure empirical(int dim, std::vector<double> coords);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] std::span<const double> coords() const { return coords_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }

  /// True when every atom carries the same weight (empirical measures).
  [[nodiscard]] bool equal_weights() const { return equal_weights_; }

  /// Sample count when the measure was built by empirical().
  [[nodiscard]] std::optional<std::size_t> n_samples() const { return n_samples_; }

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
  bool equal_weights_ = false;
  std::optional<std::size_t> n_samples_;
};

/// Total weight of the atoms lying in the half-open box of `cell`.
double cell_mass(const DiscreteMeasure& m, const DyadicCell& cell);

/// sum_i w_i exp(2 pi i k.x_i)
std::complex<double> fourier_coefficient(const DiscreteMeasure& m, const FrequencyIndex& k);

}  // namespace empdist
