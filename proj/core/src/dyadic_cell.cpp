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

#include "empdist/dyadic_cell.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "empdist/errors.hpp"

namespace empdist {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_base(int base) {
  if (base != 2 && base != 4) throw InvalidArgument("dyadic base must be 2 or 4");
}

}  // namespace

DyadicCell::DyadicCell(int base, int depth, std::vector<std::int64_t> index)
    : base_(base), depth_(depth), index_(std::move(index)) {
  check_base(base_);
  if (depth_ < 0) throw InvalidArgument("cell depth must be >= 0");
  if (index_.empty()) throw InvalidArgument("cell needs at least one coordinate");
  const int bits = base_ == 2 ? 1 : 2;
  if (depth_ * bits > 62) throw BudgetExceeded("cell depth too large for 64-bit indices");
  const std::int64_t side_count = ipow(base_, depth_);
  for (auto t : index_) {
    if (t < 0 || t >= side_count) throw InvalidArgument("cell index out of range");
  }
}

DyadicCell DyadicCell::root(int base, int dim) {
  return {base, 0, std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)};
}

DyadicCell DyadicCell::containing(int base, int depth, std::span<const double> point) {
  check_base(base);
  const double scale = std::ldexp(1.0, depth * (base == 2 ? 1 : 2));
  std::vector<std::int64_t> idx(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    idx[i] = static_cast<std::int64_t>(std::floor(point[i] * scale));
  }
  return {base, depth, std::move(idx)};
}

double DyadicCell::side() const {
  return std::ldexp(1.0, -depth_ * (base_ == 2 ? 1 : 2));
}

double DyadicCell::lower(int axis) const {
  return static_cast<double>(index_[axis]) * side();
}

std::vector<double> DyadicCell::center() const {
  std::vector<double> c(index_.size());
  const double h = side();
  for (std::size_t i = 0; i < index_.size(); ++i) {
    c[i] = (static_cast<double>(index_[i]) + 0.5) * h;
  }
  return c;
}

bool DyadicCell::contains(std::span<const double> point) const {
  const double scale = std::ldexp(1.0, depth_ * (base_ == 2 ? 1 : 2));
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (static_cast<std::int64_t>(std::floor(point[i] * scale)) != index_[i]) return false;
  }
  return true;
}

DyadicCell DyadicCell::parent() const {
  if (depth_ == 0) throw InvalidArgument("the root cell has no parent");
  std::vector<std::int64_t> idx(index_.size());
  for (std::size_t i = 0; i < index_.size(); ++i) idx[i] = index_[i] / base_;
  return {base_, depth_ - 1, std::move(idx)};
}

std::vector<DyadicCell> DyadicCell::children() const {
  const int d = dim();
  const std::int64_t count = ipow(base_, d);
  std::vector<DyadicCell> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t c = 0; c < count; ++c) {
    std::vector<std::int64_t> idx(index_.size());
    std::int64_t rest = c;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = index_[i] * base_ + rest % base_;
      rest /= base_;
    }
    out.emplace_back(base_, depth_ + 1, std::move(idx));
  }
  return out;
}

std::uint64_t DyadicCell::linear_index() const {
  const auto per_axis = static_cast<std::uint64_t>(ipow(base_, depth_));
  std::uint64_t lin = 0;
  for (auto t : index_) lin = lin * per_axis + static_cast<std::uint64_t>(t);
  return lin;
}

std::uint64_t cell_count(int base, int depth, int dim) {
  check_base(base);
  const int bits = (base == 2 ? 1 : 2) * depth * dim;
  if (bits >= 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << bits;
}

std::vector<DyadicCell> partition(int base, int depth, int dim, std::uint64_t budget) {
  check_base(base);
  if (depth < 0) throw InvalidArgument("partition depth must be >= 0");
  if (dim < 1) throw InvalidArgument("partition dimension must be >= 1");
  const std::uint64_t count = cell_count(base, depth, dim);
  if (count > budget) {
    throw BudgetExceeded("partition of " + std::to_string(count) + " cells exceeds budget of " +
                         std::to_string(budget));
  }
  const std::int64_t per_axis = ipow(base, depth);
  std::vector<DyadicCell> cells;
  cells.reserve(static_cast<std::size_t>(count));
  std::vector<std::int64_t> idx(static_cast<std::size_t>(dim), 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    cells.emplace_back(base, depth, idx);
    for (int i = dim - 1; i >= 0; --i) {
      if (++idx[i] < per_axis) break;
      idx[i] = 0;
    }
  }
  return cells;
}

}  // namespace empdist
