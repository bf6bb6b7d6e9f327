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

#include "empdist/dyadic_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "empdist/compensated.hpp"
#include "empdist/errors.hpp"

namespace empdist {

namespace {

// Cells are addressed by digit-interleaved keys: level by level from the
// coarsest, each level contributing one base-b digit per axis. The depth-j
// ancestor of a depth-J key is then key >> (bits_per_digit * d * (J - j)).
struct KeyCodec {
  int base;
  int dim;
  int bits;  // log2(base)

  [[nodiscard]] std::uint64_t encode(std::span<const std::int64_t> tau, int depth) const {
    const auto mask = static_cast<std::uint64_t>(base - 1);
    std::uint64_t key = 0;
    for (int l = 0; l < depth; ++l) {
      const int shift = bits * (depth - 1 - l);
      for (int i = 0; i < dim; ++i) {
        key = (key << bits) | ((static_cast<std::uint64_t>(tau[i]) >> shift) & mask);
      }
    }
    return key;
  }

  [[nodiscard]] DyadicCell decode(std::uint64_t key, int depth) const {
    const auto mask = static_cast<std::uint64_t>(base - 1);
    std::vector<std::int64_t> tau(static_cast<std::size_t>(dim), 0);
    for (int l = depth - 1; l >= 0; --l) {
      for (int i = dim - 1; i >= 0; --i) {
        tau[static_cast<std::size_t>(i)] |=
            static_cast<std::int64_t>(key & mask) << (bits * (depth - 1 - l));
        key >>= bits;
      }
    }
    return {base, depth, std::move(tau)};
  }
};

double coefficient_weight(int base, int j, double q) {
  return std::pow(0.5 * (base - 1) * std::pow(static_cast<double>(base), -j), q);
}

}  // namespace

DyadicBoundReport dyadic_wq_bound(const DiscreteMeasure& emp, const ReferenceMeasure& ref,
                                  double q, int J, int base, bool restrict_to_support) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  if (J < 1) throw InvalidArgument("depth J must be >= 1");
  if (base != 2 && base != 4) throw InvalidArgument("base must be 2 or 4");
  if (emp.dim() != ref.dim()) throw InvalidArgument("measure dimensions differ");
  if (restrict_to_support && !ref.has_support_oracle()) {
    throw CapabilityMissing("restrict_to_support needs a reference with a support oracle");
  }
  const int d = emp.dim();
  const KeyCodec codec{base, d, base == 2 ? 1 : 2};
  if (static_cast<long long>(codec.bits) * d * J > 62) {
    throw BudgetExceeded("depth " + std::to_string(J) + " in dimension " + std::to_string(d) +
                         " exceeds the 62-bit cell addressing budget");
  }

  // Depth-J keys of all atoms, sorted.
  const double scale = std::ldexp(1.0, codec.bits * J);
  const auto top = static_cast<std::int64_t>(scale) - 1;
  std::vector<std::pair<std::uint64_t, double>> atoms(emp.size());
  std::vector<std::int64_t> tau(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < emp.size(); ++a) {
    const auto x = emp.point(a);
    for (int i = 0; i < d; ++i) {
      tau[static_cast<std::size_t>(i)] =
          std::min(top, static_cast<std::int64_t>(std::floor(x[static_cast<std::size_t>(i)] * scale)));
    }
    atoms[a] = {codec.encode(tau, J), emp.weight(a)};
  }
  std::sort(atoms.begin(), atoms.end());

  DyadicBoundReport report;
  report.q = q;
  report.J = J;
  report.base = base;
  report.truncation_term = 2.0 * std::pow(0.5 * std::pow(static_cast<double>(base), -J), q);

  CompensatedSum total(report.truncation_term);
  std::vector<std::pair<std::uint64_t, double>> occupied;
  for (int j = 1; j <= J; ++j) {
    const int shift = codec.bits * d * (J - j);
    occupied.clear();
    for (const auto& [key, w] : atoms) {
      const std::uint64_t cell = key >> shift;
      if (occupied.empty() || occupied.back().first != cell) {
        occupied.emplace_back(cell, w);
      } else {
        occupied.back().second += w;
      }
    }

    CompensatedSum disc;
    if (restrict_to_support) {
      std::vector<std::pair<std::uint64_t, double>> support;
      for (const auto& cell : ref.support_cells(base, j)) {
        support.emplace_back(codec.encode(cell.index(), j), ref.cell_mass(cell));
      }
      std::sort(support.begin(), support.end());
      std::size_t a = 0;
      std::size_t s = 0;
      while (a < occupied.size() || s < support.size()) {
        if (s == support.size() || (a < occupied.size() && occupied[a].first < support[s].first)) {
          disc.add(occupied[a++].second);  // atoms off the support
        } else if (a == occupied.size() || support[s].first < occupied[a].first) {
          disc.add(support[s++].second);
        } else {
          disc.add(std::abs(occupied[a++].second - support[s++].second));
        }
      }
    } else {
      CompensatedSum ref_on_occupied;
      for (const auto& [key, e] : occupied) {
        const double r = ref.cell_mass(codec.decode(key, j));
        ref_on_occupied.add(r);
        disc.add(std::abs(e - r));
      }
      disc.add(std::max(0.0, 1.0 - ref_on_occupied.value()));
    }

    DepthTerm term;
    term.j = j;
    term.discrepancy_sum = disc.value();
    term.coefficient_bound = coefficient_weight(base, j, q);
    term.weighted_term = term.coefficient_bound * term.discrepancy_sum;
    total.add(term.weighted_term);
    report.per_depth.push_back(term);
  }
  report.total = total.value();
  return report;
}

std::string_view to_string(DepthRegime r) {
  switch (r) {
    case DepthRegime::small:
      return "small";
    case DepthRegime::critical:
      return "critical";
    case DepthRegime::large:
      return "large";
  }
  return "?";
}

DepthChoice choose_depth(double q, double d, std::size_t n, int base) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  if (!(d > 0.0)) throw InvalidArgument("dimension must be positive");
  if (n < 2) throw InvalidArgument("choose_depth needs n >= 2");
  if (base != 2 && base != 4) throw InvalidArgument("base must be 2 or 4");
  const double logb_n = std::log(static_cast<double>(n)) / std::log(static_cast<double>(base));
  constexpr double kSlack = 1e-12;

  if (std::abs(d - 2.0 * q) < kSlack) {
    const int J = static_cast<int>(std::floor(logb_n / (2.0 * q) + kSlack));
    return {std::max(1, J), DepthRegime::critical};
  }
  if (d < 2.0 * q) {
    const int J = static_cast<int>(std::ceil(logb_n / q - kSlack));
    return {std::max(1, J), DepthRegime::small};
  }
  if (base != 2) throw InvalidArgument("the large-dimension depth rule is stated in base 2");
  const double h = d / 2.0 - q;
  const double A = std::pow(static_cast<double>(n), 1.0 / d) *
                   std::pow(2.0 * q * (1.0 - std::pow(2.0, q - d / 2.0)) / h, 2.0 / d);
  int J = static_cast<int>(std::floor(std::log2(A * (1.0 + kSlack))));
  return {std::max(1, J), DepthRegime::large};
}

}  // namespace empdist
