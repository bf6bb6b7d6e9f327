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

#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "doctest.h"
#include "empdist/discrete_measure.hpp"
#include "empdist/domain.hpp"
#include "empdist/dyadic_cell.hpp"
#include "empdist/errors.hpp"
#include "empdist/reference_measure.hpp"
#include "empdist/rng.hpp"
#include "empdist/samplers.hpp"

using namespace empdist;

namespace {

DiscreteMeasure random_measure(int d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& c : coords) c = rng.uniform();
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 0.01;
    total += x;
  }
  for (double& x : w) x /= total;
  return {d, std::move(coords), std::move(w)};
}

}  // namespace

TEST_CASE("domain distances and diameters") {
  const double x[] = {0.05, 0.5};
  const double y[] = {0.95, 0.1};
  CHECK(Domain::cube(2, Metric::supremum).distance(x, y) == doctest::Approx(0.9));
  CHECK(Domain::cube(2, Metric::euclidean).distance(x, y) ==
        doctest::Approx(std::sqrt(0.81 + 0.16)));
  // Torus wraps 0.9 to 0.1 on the first axis.
  CHECK(Domain::torus(2, Metric::supremum).distance(x, y) == doctest::Approx(0.4));
  CHECK(Domain::cube(3, Metric::euclidean).diameter() == doctest::Approx(std::sqrt(3.0)));
  CHECK(Domain::cube(3, Metric::supremum).diameter() == 1.0);
  CHECK(Domain::torus(1, Metric::supremum).diameter() == 0.5);
  CHECK_THROWS_AS(Domain(0, Geometry::unit_cube, Metric::supremum), InvalidArgument);
}

TEST_CASE("partition counts and geometry") {
  const auto root = partition(2, 0, 3);
  REQUIRE(root.size() == 1);
  CHECK(root[0].side() == 1.0);
  CHECK(root[0].dim() == 3);

  const auto four = partition(2, 1, 2);
  CHECK(four.size() == 4);
  for (const auto& c : four) CHECK(c.side() == 0.5);

  const auto cells = partition(4, 2, 2);
  CHECK(cells.size() == 256);
  std::set<std::uint64_t> seen;
  for (const auto& c : cells) {
    CHECK(c.side() == 1.0 / 16.0);
    seen.insert(c.linear_index());
  }
  CHECK(seen.size() == 256);

  CHECK_THROWS_AS(partition(2, 13, 2, 1u << 24), BudgetExceeded);
  CHECK_THROWS_AS(partition(3, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(partition(2, -1, 1), InvalidArgument);
}

TEST_CASE("cells partition the cube: every point lies in exactly one cell") {
  Rng rng(11);
  const auto cells = partition(2, 3, 2);
  for (int s = 0; s < 200; ++s) {
    const double p[] = {rng.uniform(), rng.uniform()};
    int hits = 0;
    for (const auto& c : cells) hits += c.contains(p) ? 1 : 0;
    CHECK(hits == 1);
  }
  // Half-open boundaries: the lower corner belongs, the upper does not.
  const DyadicCell c(2, 1, {1, 0});
  const double lower[] = {0.5, 0.0};
  const double upper[] = {1.0, 0.5};
  CHECK(c.contains(lower));
  CHECK_FALSE(c.contains(upper));
}

TEST_CASE("parent and children are consistent") {
  const DyadicCell c(4, 2, {5, 14});
  CHECK(c.parent() == DyadicCell(4, 1, {1, 3}));
  const auto kids = c.children();
  CHECK(kids.size() == 16);
  for (const auto& k : kids) CHECK(k.parent() == c);
  const double p[] = {0.3, 0.9};
  CHECK(DyadicCell::containing(4, 2, p) == DyadicCell(4, 2, {4, 14}));
}

TEST_CASE("cell masses of references") {
  const auto uni = ReferenceMeasure::uniform(Domain::cube(2));
  for (const auto& c : partition(2, 1, 2)) CHECK(cell_mass(uni, c) == 0.25);

  const auto cantor = ReferenceMeasure::four_corners_cantor();
  CHECK(cell_mass(cantor, DyadicCell(4, 1, {0, 0})) == 0.25);
  CHECK(cell_mass(cantor, DyadicCell(4, 1, {3, 0})) == 0.25);
  CHECK(cell_mass(cantor, DyadicCell(4, 1, {1, 0})) == 0.0);
  CHECK(cell_mass(cantor, DyadicCell(4, 2, {12, 3})) == 1.0 / 16.0);
  CHECK(cell_mass(cantor, DyadicCell(4, 2, {13, 3})) == 0.0);
  // Base-2 cells: depth 2 equals base-4 depth 1; depth 1 is the union of four.
  CHECK(cell_mass(cantor, DyadicCell(2, 2, {3, 0})) == 0.25);
  CHECK(cell_mass(cantor, DyadicCell(2, 1, {1, 1})) == 0.25);
  CHECK(cell_mass(cantor, DyadicCell(2, 2, {1, 0})) == 0.0);
}

TEST_CASE("empirical cell mass counts atoms") {
  const auto m = DiscreteMeasure::empirical(1, {0.1, 0.2, 0.3, 0.9});
  CHECK(cell_mass(m, DyadicCell(2, 1, {0})) == 0.75);
  CHECK(cell_mass(m, DyadicCell(2, 1, {1})) == 0.25);
}

TEST_CASE("partition of unity and refinement consistency") {
  const auto uni = ReferenceMeasure::uniform(Domain::cube(2));
  const auto cantor = ReferenceMeasure::four_corners_cantor();
  const auto emp = random_measure(2, 500, 5);
  for (int base : {2, 4}) {
    for (int j = 0; j <= 3; ++j) {
      double su = 0.0, sc = 0.0, se = 0.0;
      for (const auto& c : partition(base, j, 2)) {
        su += cell_mass(uni, c);
        sc += cell_mass(cantor, c);
        se += cell_mass(emp, c);
        if (j < 3) {
          double ku = 0.0, kc = 0.0, ke = 0.0;
          for (const auto& k : c.children()) {
            ku += cell_mass(uni, k);
            kc += cell_mass(cantor, k);
            ke += cell_mass(emp, k);
          }
          CHECK(ku == cell_mass(uni, c));
          CHECK(kc == cell_mass(cantor, c));
          CHECK(ke == doctest::Approx(cell_mass(emp, c)).epsilon(1e-12));
        }
      }
      CHECK(su == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(sc == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(se == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("Cantor support oracle lists the admissible cells") {
  const auto cantor = ReferenceMeasure::four_corners_cantor();
  for (int base : {2, 4}) {
    for (int j = 0; j <= 4; ++j) {
      const auto support = cantor.support_cells(base, j);
      std::set<std::uint64_t> listed;
      for (const auto& c : support) listed.insert(c.linear_index());
      for (const auto& c : partition(base, j, 2)) {
        CHECK((cell_mass(cantor, c) > 0.0) == (listed.count(c.linear_index()) == 1));
      }
    }
  }
  CHECK(cantor.support_cells(4, 2).size() == 16);
}

TEST_CASE("Fourier coefficients") {
  const auto uni = ReferenceMeasure::uniform(Domain::torus(2));
  CHECK(uni.fourier_coefficient({{3, -1}}) == std::complex<double>(0.0, 0.0));
  CHECK(uni.fourier_coefficient({{0, 0}}) == std::complex<double>(1.0, 0.0));

  const auto delta = DiscreteMeasure::empirical(1, {0.25});
  const auto z = fourier_coefficient(delta, {{1}});
  CHECK(z.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z.imag() == doctest::Approx(1.0));

  const auto m = random_measure(2, 300, 9);
  CHECK(std::abs(fourier_coefficient(m, {{0, 0}}) - 1.0) < 1e-14);
  Rng rng(3);
  for (int s = 0; s < 50; ++s) {
    FrequencyIndex k{{static_cast<int>(rng.below(21)) - 10, static_cast<int>(rng.below(21)) - 10}};
    const auto a = fourier_coefficient(m, k);
    const auto b = fourier_coefficient(m, k.negated());
    CHECK(std::abs(a) <= 1.0 + 1e-12);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }

  CHECK_THROWS_AS(ReferenceMeasure::four_corners_cantor().fourier_coefficient({{1, 0}}),
                  CapabilityMissing);
}

TEST_CASE("frequency index sup norm") {
  CHECK(FrequencyIndex{{0, 0}}.sup_norm() == 0);
  CHECK(FrequencyIndex{{0, 0}}.is_zero());
  CHECK(FrequencyIndex{{3, -5}}.sup_norm() == 5);
  CHECK_FALSE(FrequencyIndex{{0, 1}}.is_zero());
}

TEST_CASE("discrete measure validation") {
  CHECK_THROWS_AS(DiscreteMeasure(1, {1.0}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(1, {-0.1}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(1, {0.1, 0.2}, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(2, {0.1, 0.2, 0.3}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(1, {}, {}), InvalidArgument);
  const auto e = DiscreteMeasure::empirical(2, {0.1, 0.2, 0.3, 0.4});
  CHECK(e.size() == 2);
  CHECK(e.equal_weights());
  CHECK(e.weight(0) == 0.5);
  CHECK(e.n_samples().value() == 2);
}

TEST_CASE("reference capabilities") {
  const auto uni1 = ReferenceMeasure::uniform(Domain::cube(1));
  CHECK(uni1.has_cdf());
  CHECK(uni1.cdf()(0.3) == doctest::Approx(0.3));
  CHECK_FALSE(ReferenceMeasure::uniform(Domain::cube(2)).has_cdf());
  CHECK_THROWS_AS(ReferenceMeasure::uniform(Domain::cube(2)).cdf(), CapabilityMissing);
  CHECK_FALSE(uni1.has_support_oracle());
  CHECK_THROWS_AS(uni1.support_cells(2, 1), CapabilityMissing);
  CHECK_THROWS_AS(uni1.cell_mass(DyadicCell(2, 1, {0, 0})), InvalidArgument);
}
