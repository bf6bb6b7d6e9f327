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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "empdist/domain.hpp"
#include "empdist/dyadic_cell.hpp"

namespace empdist {

class DiscreteMeasure;

/// Integer frequency k in Z^d, indexing e_k(x) = exp(2 pi i k.x).
struct FrequencyIndex {
  std::vector<int> k;

  [[nodiscard]] int sup_norm() const;
  [[nodiscard]] bool is_zero() const { return sup_norm() == 0; }
  [[nodiscard]] FrequencyIndex negated() const;
};

/// Continuous, piecewise-linear distribution function on [0,1]: knots
/// 0 = x_0 < ... < x_m = 1 with nondecreasing values from 0 to 1.
class PiecewiseLinearCdf {
 public:
  PiecewiseLinearCdf(std::vector<double> knots, std::vector<double> values);
  static PiecewiseLinearCdf uniform() { return {{0.0, 1.0}, {0.0, 1.0}}; }

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// A probability measure on [0,1)^d known through exact capabilities rather
/// than atoms: cell masses always; Fourier coefficients, a 1-D CDF, support
/// enumeration and a sampler when available.
class ReferenceMeasure {
 public:
  enum class Kind { uniform_cube, four_corners_cantor, custom };

  using CellMassFn = std::function<double(const DyadicCell&)>;
  using FourierFn = std::function<std::complex<double>(const FrequencyIndex&)>;
  /// Cells of the given (base, depth) partition carrying positive mass.
  using SupportFn = std::function<std::vector<DyadicCell>(int base, int depth)>;
  /// Draws n points (row-major coordinates) from the measure using `stream_seed`.
  using SamplerFn = std::function<std::vector<double>(std::size_t n, std::uint64_t stream_seed)>;

  struct Capabilities {
    CellMassFn cell_mass;
    FourierFn fourier;
    std::optional<PiecewiseLinearCdf> cdf;
    SupportFn support;
    SamplerFn sampler;
  };

  /// Lebesgue measure on [0,1)^d; exact cell masses, Fourier coefficients and
  /// (for d=1) CDF.
  static ReferenceMeasure uniform(const Domain& domain);

  /// Natural measure of the four-corners Cantor set in [0,1)^2. Exact cell
  /// masses in base 2 and 4 and support enumeration; no Fourier capability.
  static ReferenceMeasure four_corners_cantor();

  static ReferenceMeasure custom(const Domain& domain, Capabilities caps);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] int dim() const { return domain_.dim(); }

  [[nodiscard]] double cell_mass(const DyadicCell& cell) const;

  [[nodiscard]] bool has_fourier() const { return static_cast<bool>(caps_->fourier); }
  [[nodiscard]] std::complex<double> fourier_coefficient(const FrequencyIndex& k) const;

  [[nodiscard]] bool has_cdf() const { return caps_->cdf.has_value(); }
  [[nodiscard]] const PiecewiseLinearCdf& cdf() const;

  [[nodiscard]] bool has_support_oracle() const { return static_cast<bool>(caps_->support); }
  [[nodiscard]] std::vector<DyadicCell> support_cells(int base, int depth) const;

  [[nodiscard]] bool has_sampler() const { return static_cast<bool>(caps_->sampler); }
  [[nodiscard]] std::vector<double> sample(std::size_t n, std::uint64_t stream_seed) const;

  /// Returns a copy with the sampler hook replaced.
  [[nodiscard]] ReferenceMeasure with_sampler(SamplerFn sampler) const;

 private:
  ReferenceMeasure(Kind kind, Domain domain, Capabilities caps);

  Kind kind_;
  Domain domain_;
  std::shared_ptr<const Capabilities> caps_;
};

std::string_view to_string(ReferenceMeasure::Kind kind);

/// Dispatches to ReferenceMeasure::cell_mass; mirrors the DiscreteMeasure overload.
inline double cell_mass(const ReferenceMeasure& m, const DyadicCell& cell) {
  return m.cell_mass(cell);
}

inline std::complex<double> fourier_coefficient(const ReferenceMeasure& m,
                                                const FrequencyIndex& k) {
  return m.fourier_coefficient(k);
}

/// True when the base-2 or base-4 cell meets the four-corners Cantor set:
/// every base-4 digit pair of the index selects a corner quadrant.
bool cantor_cell_admissible(const DyadicCell& cell);

}  // namespace empdist
