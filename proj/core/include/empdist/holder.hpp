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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "empdist/rng.hpp"

namespace empdist {

using ScalarField = std::function<double(std::span<const double>)>;

/// Recursive decomposition f ~ c + sum_{j<=J} sum_lambda alpha(lambda) 1_{C_lambda}
/// on the base-2 cells of [0,1)^d, with alpha(lambda) = (f - f_{j-1})(x_lambda).
struct HolderDecomposition {
  int dim = 1;
  double q = 1.0;
  int J = 0;
  double c = 0.0;
  /// coefficients[j-1] lists alpha over the depth-j cells in row-major order.
  std::vector<std::vector<double>> coefficients;
  /// 2^{-(J+1)q}
  double remainder_bound = 0.0;
  /// max over the evaluation grid of |f - f_J|.
  double max_residual = 0.0;
  /// Coefficients with |alpha| above 2^{-(j+1)q}, plus one if the residual
  /// exceeds remainder_bound. Nonzero means f is not q-Hoelder with constant 1
  /// in the sup norm.
  std::size_t violations = 0;

  [[nodiscard]] double coefficient(int j, std::span<const std::int64_t> index) const;
  /// f_J(x)
  [[nodiscard]] double evaluate(std::span<const double> x) const;
};

/// Samples f at the cell centers down to depth J and checks the residual at
/// the lower corners and centers of the depth-`eval_grid_depth` cells.
/// Requires eval_grid_depth >= J + 2 and at most 2^24 grid cells.
HolderDecomposition holder_decompose(const ScalarField& f, int dim, double q, int J,
                                     int eval_grid_depth);

/// A random function with |f(x) - f(y)| <= ||x - y||_inf^q on [0,1]^d: a
/// signed combination (total weight <= 1) of point cones ||x - p||_inf^q, axis
/// cones |x_i - a|^q, minima of two cones and damped waves
/// sin(2 pi k.x + phi) / (2 pi |k|_1), plus a constant offset.
ScalarField random_holder_function(int dim, double q, Rng& rng);

}  // namespace empdist
