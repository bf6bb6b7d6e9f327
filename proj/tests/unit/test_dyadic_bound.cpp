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

#include "doctest.h"
#include "empdist/errors.hpp"
#include "empdist/dyadic_bound.hpp"
#include "empdist/samplers.hpp"
#include "empdist/transport.hpp"

using namespace empdist;

namespace {

double weighted_sum(const DyadicBoundReport& r) {
  double s = 0.0;
  for (const auto& t : r.per_depth) s += t.weighted_term;
  return s;
}

}  // namespace

TEST_CASE("single atom against uniform, by hand") {
  const auto emp = DiscreteMeasure::empirical(1, {0.1});
  const auto uni = ReferenceMeasure::uniform(Domain::cube(1));
  const auto r = dyadic_wq_bound(emp, uni, 1.0, 1);
  // Depth-1 discrepancies |1 - 1/2| + |0 - 1/2| = 1; 2^-1 + 2^-2 * 1.
  CHECK(r.truncation_term == 0.5);
  REQUIRE(r.per_depth.size() == 1);
  CHECK(r.per_depth[0].discrepancy_sum == doctest::Approx(1.0));
  CHECK(r.per_depth[0].coefficient_bound == 0.25);
  CHECK(r.total == doctest::Approx(0.75));
}

TEST_CASE("matching cell masses leave only the truncation term") {
  const auto uni = ReferenceMeasure::uniform(Domain::cube(2));
  for (int J = 1; J <= 4; ++J) {
    const auto emp = discretize_reference(uni, 2, J).measure;
    for (double q : {1.0, 0.5}) {
      const auto r = dyadic_wq_bound(emp, uni, q, J);
      CHECK(r.total == doctest::Approx(std::pow(2.0, 1.0 - (J + 1) * q)).epsilon(1e-12));
      CHECK(r.total == doctest::Approx(r.truncation_term).epsilon(1e-12));
    }
  }
  const auto cantor = ReferenceMeasure::four_corners_cantor();
  for (int J = 1; J <= 4; ++J) {
    const auto emp = discretize_reference(cantor, 4, J).measure;
    const auto r = dyadic_wq_bound(emp, cantor, 0.5, J, 4, true);
    CHECK(weighted_sum(r) <= 1e-12);
    const auto full = dyadic_wq_bound(emp, cantor, 0.5, J, 4, false);
    CHECK(full.total == doctest::Approx(r.total).epsilon(1e-12));
  }
}

TEST_CASE("report invariants and monotone truncation") {
  const auto uni = ReferenceMeasure::uniform(Domain::cube(2));
  const auto emp = sample_iid(IidModel::uniform(2), 100, {1, 0, "inv"});
  double prev = INFINITY;
  for (int J = 1; J <= 8; ++J) {
    const auto r = dyadic_wq_bound(emp, uni, 0.75, J);
    CHECK(r.J == J);
    CHECK(r.per_depth.size() == static_cast<std::size_t>(J));
    CHECK(r.total == doctest::Approx(r.truncation_term + weighted_sum(r)).epsilon(1e-12));
    CHECK(r.total >= r.truncation_term);
    CHECK(r.truncation_term <= prev);
    prev = r.truncation_term;
    for (const auto& t : r.per_depth) {
      CHECK(t.discrepancy_sum >= 0.0);
      CHECK(t.discrepancy_sum <= 2.0 + 1e-12);
      CHECK(t.coefficient_bound == doctest::Approx(std::pow(2.0, -(t.j + 1) * 0.75)));
    }
  }
}

TEST_CASE("depth selection rules") {
  const auto critical = choose_depth(1.0, 2.0, 1024);
  CHECK(critical.J == 5);
  CHECK(critical.regime == DepthRegime::critical);
  const auto large = choose_depth(1.0, 4.0, 4096);
  CHECK(large.J == 3);
  CHECK(large.regime == DepthRegime::large);
  const auto small = choose_depth(1.0, 1.0, 256);
  CHECK(small.J == 8);
  CHECK(small.regime == DepthRegime::small);
  // Small regime makes the truncation term at most 2/n.
  for (std::size_t n : {10u, 100u, 1000u}) {
    const auto c = choose_depth(0.75, 1.0, n);
    CHECK(std::pow(2.0, 1.0 - (c.J + 1) * 0.75) <= 2.0 / n);
  }
  // Large regime: 2^J lies in [A/2, A].
  for (std::size_t n : {100u, 5000u, 100000u}) {
    const double q = 0.5, d = 3.0;
    const double A = std::pow(n, 1.0 / d) *
                     std::pow(2 * q * (1 - std::pow(2.0, q - d / 2)) / (d / 2 - q), 2.0 / d);
    const auto c = choose_depth(q, d, n);
    if (A >= 2.0) {
      CHECK(std::ldexp(1.0, c.J) <= A * (1 + 1e-12));
      CHECK(std::ldexp(1.0, c.J) >= A / 2);
    }
  }
  CHECK(choose_depth(0.5, 1.0, 4096, 4).J == 6);
  CHECK(choose_depth(0.5, 1.0, 4096, 4).regime == DepthRegime::critical);
  CHECK_THROWS_AS(choose_depth(0.0, 2.0, 100), InvalidArgument);
  CHECK_THROWS_AS(choose_depth(1.5, 2.0, 100), InvalidArgument);
  CHECK_THROWS_AS(choose_depth(1.0, 2.0, 1), InvalidArgument);
}

TEST_CASE("the bound dominates the exact transport cost") {
  for (int d : {1, 2}) {
    const auto uni = ReferenceMeasure::uniform(Domain::cube(d));
    const int depth = d == 1 ? 10 : 5;
    const auto disc = discretize_reference(uni, 2, depth);
    for (double q : {1.0, 0.5}) {
      for (std::size_t n : {16u, 64u, 256u}) {
        const auto emp = sample_iid(IidModel::uniform(d), n, {n, 0, "validity"});
        const int J = choose_depth(q, d, n).J;
        const auto r = dyadic_wq_bound(emp, uni, q, J);
        TransportOptions o;
        o.cost_exponent = q;
        const double exact = w1_exact_discrete(emp, disc.measure, Metric::supremum, o).cost;
        CHECK(r.total >= exact - std::pow(disc.error_bound, q));
      }
    }
  }
  // Restricted Cantor bound against a depth-5 support discretization.
  const auto cantor = ReferenceMeasure::four_corners_cantor();
  const auto disc = discretize_reference(cantor, 4, 5);
  for (std::size_t n : {16u, 64u, 256u}) {
    const auto emp = sample_iid(IidModel::cantor(), n, {n, 0, "cantor-validity"});
    const int J = choose_depth(0.5, 1.0, n, 4).J;
    const auto r = dyadic_wq_bound(emp, cantor, 0.5, J, 4, true);
    TransportOptions o;
    o.cost_exponent = 0.5;
    o.max_pairs = 1u << 20;
    const double exact = w1_exact_discrete(emp, disc.measure, Metric::supremum, o).cost;
    CHECK(r.total >= exact - std::sqrt(disc.error_bound));
  }
}

TEST_CASE("argument errors") {
  const auto emp = DiscreteMeasure::empirical(2, {0.1, 0.2});
  const auto uni = ReferenceMeasure::uniform(Domain::cube(2));
  CHECK_THROWS_AS(dyadic_wq_bound(emp, uni, 1.0, 2, 2, true), CapabilityMissing);
  CHECK_THROWS_AS(dyadic_wq_bound(emp, uni, 0.0, 2), InvalidArgument);
  CHECK_THROWS_AS(dyadic_wq_bound(emp, uni, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(dyadic_wq_bound(emp, uni, 1.0, 2, 3), InvalidArgument);
  CHECK_THROWS_AS(dyadic_wq_bound(emp, ReferenceMeasure::uniform(Domain::cube(1)), 1.0, 2),
                  InvalidArgument);
  CHECK_THROWS_AS(dyadic_wq_bound(emp, uni, 1.0, 40), BudgetExceeded);
}
