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

#include "empdist/samplers.hpp"

#include <cmath>
#include <string>

#include "empdist/errors.hpp"

namespace empdist {

void IidModel::validate() const {
  if (dim < 1) throw InvalidArgument("sampling dimension must be >= 1");
  if (kind == Kind::cantor_ifs) {
    if (dim != 2) throw InvalidArgument("cantor_ifs samples live in d=2");
    if (cantor_depth < 1 || cantor_depth > 26) {
      throw InvalidArgument("cantor digit count must lie in [1, 26]");
    }
  }
}

std::string_view to_string(IidModel::Kind kind) {
  return kind == IidModel::Kind::uniform_cube ? "uniform_cube" : "cantor_ifs";
}

IidModel::Kind parse_iid_kind(std::string_view s) {
  if (s == "uniform_cube" || s == "uniform") return IidModel::Kind::uniform_cube;
  if (s == "cantor_ifs" || s == "cantor") return IidModel::Kind::cantor_ifs;
  throw InvalidArgument("unknown iid model: " + std::string(s));
}

std::vector<double> draw_iid_points(const IidModel& model, std::size_t n, Rng& rng) {
  model.validate();
  const auto d = static_cast<std::size_t>(model.dim);
  std::vector<double> coords(n * d);
  if (model.kind == IidModel::Kind::uniform_cube) {
    for (double& c : coords) c = rng.uniform();
    return coords;
  }
  // Composition of M corner maps x -> x/4 + t, t in {0, 3/4}^2: each digit
  // contributes 3 * 4^-m independently per axis. Finite sums stay inside K.
  const int digits = model.cantor_depth;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t r = rng.bits();
    double x = 0.0;
    double y = 0.0;
    for (int m = 0; m < digits; ++m) {
      const double scale = 3.0 * std::ldexp(1.0, -2 * (m + 1));
      if ((r >> (2 * m)) & 1U) x += scale;
      if ((r >> (2 * m + 1)) & 1U) y += scale;
    }
    coords[2 * i] = x;
    coords[2 * i + 1] = y;
  }
  return coords;
}

DiscreteMeasure sample_iid(const IidModel& model, std::size_t n, const SeedSpec& seed) {
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  Rng rng(seed);
  return DiscreteMeasure::empirical(model.dim, draw_iid_points(model, n, rng));
}

ReferenceMeasure reference_for(const IidModel& model) {
  model.validate();
  ReferenceMeasure base = model.kind == IidModel::Kind::uniform_cube
                              ? ReferenceMeasure::uniform(Domain::cube(model.dim))
                              : ReferenceMeasure::four_corners_cantor();
  return base.with_sampler([model](std::size_t n, std::uint64_t stream) {
    Rng rng(stream);
    return draw_iid_points(model, n, rng);
  });
}

}  // namespace empdist
