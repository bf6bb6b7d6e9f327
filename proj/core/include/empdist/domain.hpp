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

#include <span>
#include <string_view>

namespace empdist {

enum class Geometry { unit_cube, torus };
enum class Metric { euclidean, supremum };

std::string_view to_string(Geometry g);
std::string_view to_string(Metric m);
Geometry parse_geometry(std::string_view s);
Metric parse_metric(std::string_view s);

/// Ambient space of every measure: [0,1)^d, either as the unit cube or as the
/// flat torus R^d / Z^d, with a euclidean or supremum norm.
class Domain {
 public:
  Domain(int dim, Geometry geometry, Metric metric);

  static Domain cube(int dim, Metric metric = Metric::supremum) {
    return {dim, Geometry::unit_cube, metric};
  }
  static Domain torus(int dim, Metric metric = Metric::euclidean) {
    return {dim, Geometry::torus, metric};
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] Geometry geometry() const { return geometry_; }
  [[nodiscard]] Metric metric() const { return metric_; }

  /// Distance between two points given as d coordinates each. On the torus
  /// each coordinate difference is reduced to its shortest representative.
  [[nodiscard]] double distance(std::span<const double> x, std::span<const double> y) const;

  /// sqrt(d) or 1 on the cube, half of that on the torus.
  [[nodiscard]] double diameter() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  int dim_;
  Geometry geometry_;
  Metric metric_;
};

}  // namespace empdist
