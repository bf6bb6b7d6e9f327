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

#include <cstdint>
#include <span>
#include <vector>

namespace empdist {

/// Half-open box prod_i [tau_i b^-j, (tau_i+1) b^-j) of the regular depth-j
/// partition of [0,1)^d in base b (2 or 4).
class DyadicCell {
 public:
  DyadicCell(int base, int depth, std::vector<std::int64_t> index);

  /// The depth-0 cell [0,1)^d.
  static DyadicCell root(int base, int dim);

  /// Cell of the depth-`depth` partition containing `point`.
  static DyadicCell containing(int base, int depth, std::span<const double> point);

  [[nodiscard]] int base() const { return base_; }
  [[nodiscard]] int depth() const { return depth_; }
  [[nodiscard]] int dim() const { return static_cast<int>(index_.size()); }
  [[nodiscard]] std::span<const std::int64_t> index() const { return index_; }

  /// b^-j
  [[nodiscard]] double side() const;
  [[nodiscard]] double lower(int axis) const;
  [[nodiscard]] std::vector<double> center() const;
  [[nodiscard]] bool contains(std::span<const double> point) const;

  [[nodiscard]] DyadicCell parent() const;
  /// The b^d cells of depth j+1 refining this one.
  [[nodiscard]] std::vector<DyadicCell> children() const;

  /// Row-major linear index in [0, b^{dj}).
  [[nodiscard]] std::uint64_t linear_index() const;

  friend bool operator==(const DyadicCell&, const DyadicCell&) = default;

 private:
  int base_;
  int depth_;
  std::vector<std::int64_t> index_;
};

/// Default upper bound on the number of cells partition() will materialize.
inline constexpr std::uint64_t kDefaultCellBudget = std::uint64_t{1} << 24;

/// base^(d*depth), or an overflow-saturated value when it does not fit in 63 bits.
std::uint64_t cell_count(int base, int depth, int dim);

/// All cells of the depth-`depth` partition in row-major order.
/// Throws BudgetExceeded when base^(d*depth) exceeds `budget`.
std::vector<DyadicCell> partition(int base, int depth, int dim,
                                  std::uint64_t budget = kDefaultCellBudget);

}  // namespace empdist
