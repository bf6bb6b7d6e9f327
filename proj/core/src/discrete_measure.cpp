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

#include "empdist/discrete_measure.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "empdist/compensated.hpp"
#include "empdist/dyadic_cell.hpp"
#include "empdist/errors.hpp"
#include "empdist/reference_measure.hpp"

namespace empdist {

namespace {

void check_coords(int dim, std::span<const double> coords) {
  if (dim < 1) throw InvalidArgument("measure dimension must be >= 1");
  if (coords.size() % static_cast<std::size_t>(dim) != 0) {
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
  }
  for (double c : coords) {
    if (!(c >= 0.0 && c < 1.0)) {
      throw InvalidArgument("atom coordinate outside [0,1): " + std::to_string(c));
    }
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  check_coords(dim_, coords_);
  if (weights_.empty()) throw InvalidArgument("measure needs at least one atom");
  if (coords_.size() != weights_.size() * static_cast<std::size_t>(dim_)) {
    throw InvalidArgument("atom and weight counts differ");
  }
  CompensatedSum total;
  equal_weights_ = true;
  for (double w : weights_) {
    if (!(w > 0.0 && w <= 1.0)) throw InvalidArgument("atom weight outside (0,1]");
    if (w != weights_.front()) equal_weights_ = false;
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw InvalidArgument("weights sum to " + std::to_string(total.value()) + ", not 1");
  }
}

DiscreteMeasure DiscreteMeasure::empirical(int dim, std::vector<double> coords) {
  if (dim < 1) throw InvalidArgument("measure dimension must be >= 1");
  const std::size_t n = coords.size() / static_cast<std::size_t>(dim);
  if (n == 0) throw InvalidArgument("empirical measure needs at least one sample");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  DiscreteMeasure m(dim, std::move(coords), std::move(w));
  m.equal_weights_ = true;
  m.n_samples_ = n;
  return m;
}

double cell_mass(const DiscreteMeasure& m, const DyadicCell& cell) {
  if (cell.dim() != m.dim()) throw InvalidArgument("cell and measure dimensions differ");
  CompensatedSum mass;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (cell.contains(m.point(i))) mass.add(m.weight(i));
  }
  return mass.value();
}

std::complex<double> fourier_coefficient(const DiscreteMeasure& m, const FrequencyIndex& k) {
  if (static_cast<int>(k.k.size()) != m.dim()) {
    throw InvalidArgument("frequency and measure dimensions differ");
  }
  CompensatedSum re;
  CompensatedSum im;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto x = m.point(i);
    // Reduce k.x modulo 1 before scaling so large |k| keeps full phase accuracy.
    double phase = 0.0;
    for (int a = 0; a < m.dim(); ++a) {
      const double t = static_cast<double>(k.k[a]) * x[a];
      phase += t - std::floor(t);
    }
    phase -= std::floor(phase);
    const double angle = 2.0 * std::numbers::pi * phase;
    re.add(m.weight(i) * std::cos(angle));
    im.add(m.weight(i) * std::sin(angle));
  }
  return {re.value(), im.value()};
}

}  // namespace empdist
