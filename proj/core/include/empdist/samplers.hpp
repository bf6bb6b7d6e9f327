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
#include <string_view>

#include "empdist/discrete_measure.hpp"
#include "empdist/reference_measure.hpp"
#include "empdist/rng.hpp"

namespace empdist {

/// Law of i.i.d. samples.
struct IidModel {
  enum class Kind { uniform_cube, cantor_ifs };

  Kind kind = Kind::uniform_cube;
  int dim = 1;
  /// Number of base-4 digits drawn per Cantor point.
  int cantor_depth = 16;

  static IidModel uniform(int d) { return {Kind::uniform_cube, d, 16}; }
  static IidModel cantor(int digits = 16) { return {Kind::cantor_ifs, 2, digits}; }

  /// Throws InvalidArgument when the invariants (cantor needs d=2, M>=1) fail.
  void validate() const;
};

std::string_view to_string(IidModel::Kind kind);
IidModel::Kind parse_iid_kind(std::string_view s);

/// Row-major coordinates of n independent draws.
std::vector<double> draw_iid_points(const IidModel& model, std::size_t n, Rng& rng);

/// Empirical measure of n independent draws from `model` on the stream of `seed`.
DiscreteMeasure sample_iid(const IidModel& model, std::size_t n, const SeedSpec& seed);

/// The exact reference measure of the model, with its sampler hook attached.
ReferenceMeasure reference_for(const IidModel& model);

}  // namespace empdist
