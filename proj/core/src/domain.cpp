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

#include "empdist/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "empdist/errors.hpp"

namespace empdist {

std::string_view to_string(Geometry g) {
  return g == Geometry::unit_cube ? "unit_cube" : "torus";
}

std::string_view to_string(Metric m) {
  return m == Metric::euclidean ? "euclidean" : "supremum";
}

Geometry parse_geometry(std::string_view s) {
  if (s == "unit_cube" || s == "cube") return Geometry::unit_cube;
  if (s == "torus") return Geometry::torus;
  throw InvalidArgument("unknown geometry: " + std::string(s));
}

Metric parse_metric(std::string_view s) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "supremum" || s == "sup") return Metric::supremum;
  throw InvalidArgument("unknown metric: " + std::string(s));
}

Domain::Domain(int dim, Geometry geometry, Metric metric)
    : dim_(dim), geometry_(geometry), metric_(metric) {
  if (dim < 1) throw InvalidArgument("domain dimension must be >= 1");
}

double Domain::distance(std::span<const double> x, std::span<const double> y) const {
  double acc = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double delta = std::abs(x[i] - y[i]);
    if (geometry_ == Geometry::torus) {
      delta -= std::floor(delta);
      delta = std::min(delta, 1.0 - delta);
    }
    if (metric_ == Metric::supremum) {
      acc = std::max(acc, delta);
    } else {
      acc += delta * delta;
    }
  }
  return metric_ == Metric::supremum ? acc : std::sqrt(acc);
}

double Domain::diameter() const {
  const double cube = metric_ == Metric::euclidean ? std::sqrt(static_cast<double>(dim_)) : 1.0;
  return geometry_ == Geometry::torus ? cube / 2.0 : cube;
}

}  // namespace empdist
