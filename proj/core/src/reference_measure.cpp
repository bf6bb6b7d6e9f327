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

#include "empdist/reference_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "empdist/errors.hpp"

namespace empdist {

int FrequencyIndex::sup_norm() const {
  int m = 0;
  for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

FrequencyIndex FrequencyIndex::negated() const {
  FrequencyIndex out{k};
  for (int& v : out.k) v = -v;
  return out;
}

PiecewiseLinearCdf::PiecewiseLinearCdf(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw InvalidArgument("cdf needs at least two knots with matching values");
  }
  if (knots_.front() != 0.0 || knots_.back() != 1.0) {
    throw InvalidArgument("cdf knots must start at 0 and end at 1");
  }
  if (values_.front() != 0.0 || values_.back() != 1.0) {
    throw InvalidArgument("cdf must rise from 0 to 1");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw InvalidArgument("cdf knots must increase");
    if (values_[i] < values_[i - 1]) throw InvalidArgument("cdf values must not decrease");
  }
}

double PiecewiseLinearCdf::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto hi = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

namespace {

void check_cell_dim(const ReferenceMeasure& m, const DyadicCell& cell) {
  if (cell.dim() != m.dim()) throw InvalidArgument("cell and reference dimensions differ");
}

// Base-4 digits of the cell index per axis, most significant first. A base-2
// cell of odd depth yields a trailing half digit, reported as -1 (free).
bool cantor_digits_ok(const DyadicCell& cell) {
  const int depth = cell.depth();
  for (auto tau : cell.index()) {
    if (cell.base() == 4) {
      for (int m = 0; m < depth; ++m) {
        const auto digit = (tau >> (2 * m)) & 3;
        if (digit != 0 && digit != 3) return false;
      }
    } else {
      // Bits are grouped in pairs from the most significant end; a complete
      // pair must be 00 or 11.
      const int full_pairs = depth / 2;
      const int shift0 = depth % 2;
      for (int m = 0; m < full_pairs; ++m) {
        const auto pair = (tau >> (shift0 + 2 * m)) & 3;
        if (pair != 0 && pair != 3) return false;
      }
    }
  }
  return true;
}

double cantor_cell_mass(const DyadicCell& cell) {
  if (!cantor_digits_ok(cell)) return 0.0;
  const int base4_depth = cell.base() == 4 ? cell.depth() : (cell.depth() + 1) / 2;
  return std::ldexp(1.0, -2 * base4_depth);
}

std::vector<DyadicCell> cantor_support(int base, int depth) {
  if (base != 2 && base != 4) throw InvalidArgument("dyadic base must be 2 or 4");
  // Per-axis admissible index values, then the cartesian square.
  std::vector<std::int64_t> axis{0};
  if (base == 4) {
    for (int m = 0; m < depth; ++m) {
      std::vector<std::int64_t> next;
      next.reserve(axis.size() * 2);
      for (auto t : axis) {
        next.push_back(t * 4);
        next.push_back(t * 4 + 3);
      }
      axis.swap(next);
    }
  } else {
    for (int m = 0; m < depth / 2; ++m) {
      std::vector<std::int64_t> next;
      for (auto t : axis) {
        next.push_back(t * 4);
        next.push_back(t * 4 + 3);
      }
      axis.swap(next);
    }
    if (depth % 2 == 1) {
      std::vector<std::int64_t> next;
      for (auto t : axis) {
        next.push_back(t * 2);
        next.push_back(t * 2 + 1);
      }
      axis.swap(next);
    }
  }
  std::vector<DyadicCell> cells;
  cells.reserve(axis.size() * axis.size());
  for (auto a : axis) {
    for (auto b : axis) cells.emplace_back(base, depth, std::vector<std::int64_t>{a, b});
  }
  return cells;
}

}  // namespace

bool cantor_cell_admissible(const DyadicCell& cell) {
  if (cell.dim() != 2) throw InvalidArgument("the four-corners Cantor set lives in d=2");
  return cantor_digits_ok(cell);
}

ReferenceMeasure::ReferenceMeasure(Kind kind, Domain domain, Capabilities caps)
    : kind_(kind),
      domain_(domain),
      caps_(std::make_shared<const Capabilities>(std::move(caps))) {
  if (!caps_->cell_mass) throw InvalidArgument("reference measure needs an exact cell_mass");
  if (caps_->cdf && domain_.dim() != 1) {
    throw InvalidArgument("a cdf capability is only meaningful in d=1");
  }
}

ReferenceMeasure ReferenceMeasure::uniform(const Domain& domain) {
  const int d = domain.dim();
  Capabilities caps;
  caps.cell_mass = [d](const DyadicCell& cell) {
    return std::pow(cell.side(), static_cast<double>(d));
  };
  caps.fourier = [](const FrequencyIndex& k) {
    return k.is_zero() ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 0.0);
  };
  if (d == 1) caps.cdf = PiecewiseLinearCdf::uniform();
  return {Kind::uniform_cube, domain, std::move(caps)};
}

ReferenceMeasure ReferenceMeasure::four_corners_cantor() {
  Capabilities caps;
  caps.cell_mass = cantor_cell_mass;
  caps.support = cantor_support;
  return {Kind::four_corners_cantor, Domain::cube(2, Metric::supremum), std::move(caps)};
}

ReferenceMeasure ReferenceMeasure::custom(const Domain& domain, Capabilities caps) {
  return {Kind::custom, domain, std::move(caps)};
}

double ReferenceMeasure::cell_mass(const DyadicCell& cell) const {
  check_cell_dim(*this, cell);
  return caps_->cell_mass(cell);
}

std::complex<double> ReferenceMeasure::fourier_coefficient(const FrequencyIndex& k) const {
  if (!caps_->fourier) {
    throw CapabilityMissing("reference measure '" + std::string(to_string(kind_)) +
                            "' has no Fourier coefficients");
  }
  if (static_cast<int>(k.k.size()) != dim()) {
    throw InvalidArgument("frequency and reference dimensions differ");
  }
  return caps_->fourier(k);
}

const PiecewiseLinearCdf& ReferenceMeasure::cdf() const {
  if (!caps_->cdf) {
    throw CapabilityMissing("reference measure '" + std::string(to_string(kind_)) +
                            "' has no cdf");
  }
  return *caps_->cdf;
}

std::vector<DyadicCell> ReferenceMeasure::support_cells(int base, int depth) const {
  if (!caps_->support) {
    throw CapabilityMissing("reference measure '" + std::string(to_string(kind_)) +
                            "' has no support oracle");
  }
  return caps_->support(base, depth);
}

std::vector<double> ReferenceMeasure::sample(std::size_t n, std::uint64_t stream_seed) const {
  if (!caps_->sampler) {
    throw CapabilityMissing("reference measure '" + std::string(to_string(kind_)) +
                            "' has no sampler");
  }
  return caps_->sampler(n, stream_seed);
}

ReferenceMeasure ReferenceMeasure::with_sampler(SamplerFn sampler) const {
  Capabilities caps = *caps_;
  caps.sampler = std::move(sampler);
  return {kind_, domain_, std::move(caps)};
}

std::string_view to_string(ReferenceMeasure::Kind kind) {
  switch (kind) {
    case ReferenceMeasure::Kind::uniform_cube:
      return "uniform_cube";
    case ReferenceMeasure::Kind::four_corners_cantor:
      return "four_corners_cantor";
    case ReferenceMeasure::Kind::custom:
      return "custom";
  }
  return "custom";
}

}  // namespace empdist
