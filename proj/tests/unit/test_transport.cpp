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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "empdist/discrete_measure.hpp"
#include "empdist/dyadic_cell.hpp"
#include "empdist/errors.hpp"
#include "empdist/reference_measure.hpp"
#include "empdist/rng.hpp"
#include "empdist/samplers.hpp"
#include "empdist/transport.hpp"

using namespace empdist;

namespace {

DiscreteMeasure random_measure(int d, std::size_t n, Rng& rng, bool equal) {
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& c : coords) c = rng.uniform();
  if (equal) return DiscreteMeasure::empirical(d, std::move(coords));
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform() + 0.05;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return {d, std::move(coords), std::move(w)};
}

double cost(const DiscreteMeasure& a, const DiscreteMeasure& b, Metric m,
            TransportSolver s = TransportSolver::automatic, double exponent = 1.0) {
  TransportOptions o;
  o.solver = s;
  o.cost_exponent = exponent;
  const auto r = w1_exact_discrete(a, b, m, o);
  CHECK(r.feasibility_residual <= 1e-9);
  CHECK(r.optimality_gap <= 1e-9);
  CHECK(r.cost >= 0.0);
  return r.cost;
}

}  // namespace

TEST_CASE("one-dimensional W1 by CDF integration") {
  const auto d0 = DiscreteMeasure::empirical(1, {0.0});
  const auto d1 = DiscreteMeasure::empirical(1, {0.75});
  CHECK(w1_exact_1d(d0, d1) == doctest::Approx(0.75));

  // Half mass at 0 and 0.5 against uniform: the CDF gap integrates to
  // 2 * int_0^{1/2} (1/2 - x) dx = 1/4.
  const auto uni = ReferenceMeasure::uniform(Domain::cube(1));
  const auto two = DiscreteMeasure::empirical(1, {0.0, 0.5});
  CHECK(w1_exact_1d(two, uni) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(w1_exact_1d(uni, two) == doctest::Approx(0.25).epsilon(1e-14));
  // A single atom at x against uniform: x^2/2 + (1-x)^2/2.
  const auto atom = DiscreteMeasure::empirical(1, {0.3});
  CHECK(w1_exact_1d(atom, uni) == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));

  Rng rng(1);
  const auto a = random_measure(1, 20, rng, false);
  CHECK(w1_exact_1d(a, a) == 0.0);
  CHECK(w1_exact_1d(uni, uni) == 0.0);
  CHECK_THROWS_AS(w1_exact_1d(DiscreteMeasure::empirical(2, {0.1, 0.2}), a), InvalidArgument);
  CHECK_THROWS_AS(w1_exact_1d(a, ReferenceMeasure::uniform(Domain::cube(2))), InvalidArgument);
}

TEST_CASE("discrete transport: hand examples") {
  const DiscreteMeasure half(2, {0.0, 0.0, 0.5, 0.0}, {0.5, 0.5});
  const DiscreteMeasure origin(2, {0.0, 0.0}, {1.0});
  CHECK(cost(half, origin, Metric::euclidean) == doctest::Approx(0.25));
  CHECK(cost(half, origin, Metric::supremum) == doctest::Approx(0.25));

  Rng rng(2);
  const auto a = random_measure(3, 40, rng, true);
  std::vector<double> permuted;
  for (std::size_t i = 40; i-- > 0;) {
    const auto p = a.point(i);
    permuted.insert(permuted.end(), p.begin(), p.end());
  }
  CHECK(cost(a, DiscreteMeasure::empirical(3, permuted), Metric::euclidean) <= 1e-12);
}

TEST_CASE("discrete transport agrees with the 1D oracle") {
  Rng rng(3);
  for (int s = 0; s < 50; ++s) {
    const std::size_t n = 1 + rng.below(64);
    const std::size_t m = 1 + rng.below(64);
    const auto a = random_measure(1, n, rng, s % 2 == 0);
    const auto b = random_measure(1, m, rng, s % 3 == 0);
    CHECK(cost(a, b, Metric::supremum) == doctest::Approx(w1_exact_1d(a, b)).epsilon(1e-9));
    CHECK(cost(a, b, Metric::euclidean) == doctest::Approx(w1_exact_1d(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("W_q on small instances matches brute force over permutations") {
  Rng rng(4);
  for (int s = 0; s < 10; ++s) {
    const auto a = random_measure(2, 6, rng, true);
    const auto b = random_measure(2, 6, rng, true);
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    const Domain dom = Domain::cube(2, Metric::euclidean);
    do {
      double c = 0.0;
      for (int i = 0; i < 6; ++i) c += std::sqrt(dom.distance(a.point(i), b.point(perm[i])));
      best = std::min(best, c / 6.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(cost(a, b, Metric::euclidean, TransportSolver::automatic, 0.5) ==
          doctest::Approx(best).epsilon(1e-10));
    CHECK(cost(a, b, Metric::euclidean, TransportSolver::transportation, 0.5) ==
          doctest::Approx(best).epsilon(1e-10));
  }
}

TEST_CASE("all exact solvers agree") {
  Rng rng(5);
  for (int s = 0; s < 6; ++s) {
    const Metric m = s % 2 == 0 ? Metric::supremum : Metric::euclidean;
    const auto a = random_measure(2, 30, rng, true);
    const auto b = random_measure(2, 30, rng, true);
    const double ref = cost(a, b, m, TransportSolver::assignment);
    CHECK(cost(a, b, m, TransportSolver::transportation) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(cost(a, b, m, TransportSolver::auction) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(cost(a, b, m, TransportSolver::primal_dual) == doctest::Approx(ref).epsilon(1e-9));

    // Few sinks: 8 objects, 40 unit persons.
    const auto c = random_measure(3, 8, rng, true);
    const auto e = random_measure(3, 40, rng, true);
    const double ref2 = cost(c, e, m, TransportSolver::transportation);
    CHECK(cost(c, e, m, TransportSolver::auction) == doctest::Approx(ref2).epsilon(1e-9));
    CHECK(cost(c, e, m, TransportSolver::primal_dual) == doctest::Approx(ref2).epsilon(1e-9));
    CHECK(cost(e, c, m, TransportSolver::primal_dual) == doctest::Approx(ref2).epsilon(1e-9));
  }
  // Sup-norm ties on a lattice stress the tie handling.
  const auto ref = ReferenceMeasure::uniform(Domain::cube(2));
  const auto grid = discretize_reference(ref, 2, 4).measure;
  const auto emp = random_measure(2, 16, rng, true);
  const double t = cost(emp, grid, Metric::supremum, TransportSolver::transportation);
  CHECK(cost(emp, grid, Metric::supremum, TransportSolver::primal_dual) ==
        doctest::Approx(t).epsilon(1e-9));
  CHECK(cost(emp, grid, Metric::supremum, TransportSolver::auction) ==
        doctest::Approx(t).epsilon(1e-9));

  // Forced solvers reject inputs outside their reach.
  const auto w = random_measure(2, 30, rng, false);
  const auto u = random_measure(2, 30, rng, true);
  const auto v = random_measure(2, 7, rng, true);
  TransportOptions o;
  o.solver = TransportSolver::assignment;
  CHECK_THROWS_AS(w1_exact_discrete(w, u, Metric::supremum, o), InvalidArgument);
  CHECK_THROWS_AS(w1_exact_discrete(v, u, Metric::supremum, o), InvalidArgument);
  o.solver = TransportSolver::auction;
  CHECK_THROWS_AS(w1_exact_discrete(w, u, Metric::supremum, o), InvalidArgument);
  o.solver = TransportSolver::primal_dual;
  CHECK_THROWS_AS(w1_exact_discrete(v, u, Metric::supremum, o), InvalidArgument);
}

TEST_CASE("symmetry, triangle inequality and metric comparison") {
  Rng rng(6);
  for (int s = 0; s < 10; ++s) {
    const int d = 1 + s % 3;
    const auto a = random_measure(d, 12, rng, s % 2 == 0);
    const auto b = random_measure(d, 9, rng, false);
    const auto c = random_measure(d, 15, rng, true);
    const double ab = cost(a, b, Metric::euclidean);
    CHECK(std::abs(ab - cost(b, a, Metric::euclidean)) <= 1e-10);
    CHECK(ab <= cost(a, c, Metric::euclidean) + cost(c, b, Metric::euclidean) + 1e-9);
    const double sup = cost(a, b, Metric::supremum);
    CHECK(sup <= ab + 1e-12);
    CHECK(ab <= std::sqrt(static_cast<double>(d)) * sup + 1e-12);
  }
}

TEST_CASE("discretization of references") {
  const auto uni = ReferenceMeasure::uniform(Domain::cube(1));
  const auto disc = discretize_reference(uni, 2, 1);
  REQUIRE(disc.measure.size() == 2);
  CHECK(disc.measure.point(0)[0] == 0.25);
  CHECK(disc.measure.point(1)[0] == 0.75);
  CHECK(disc.measure.weight(0) == 0.5);
  CHECK(disc.error_bound == 0.25);

  const auto cantor = ReferenceMeasure::four_corners_cantor();
  const auto c2 = discretize_reference(cantor, 4, 2);
  REQUIRE(c2.measure.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(c2.measure.weight(i) == 1.0 / 16.0);
    CHECK(cantor_cell_admissible(DyadicCell::containing(4, 2, c2.measure.point(i))));
  }
  CHECK(c2.error_bound == 1.0 / 32.0);
  CHECK(discretize_reference(cantor, 4, 2, Metric::euclidean).error_bound ==
        doctest::Approx(std::sqrt(2.0) / 32.0));

  for (int depth = 0; depth <= 3; ++depth) {
    for (const auto& m : {discretize_reference(ReferenceMeasure::uniform(Domain::cube(3)), 2, depth).measure,
                          discretize_reference(cantor, 2, depth).measure}) {
      double total = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) total += m.weight(i);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(discretize_reference(ReferenceMeasure::uniform(Domain::cube(3)), 2, 8,
                                       Metric::supremum, 1u << 20),
                  BudgetExceeded);
}

TEST_CASE("discretized reference sandwiches the true distance") {
  const auto uni = ReferenceMeasure::uniform(Domain::cube(1));
  for (int depth : {3, 6, 8}) {
    const auto disc = discretize_reference(uni, 2, depth);
    for (std::uint64_t r = 0; r < 5; ++r) {
      const auto emp = sample_iid(IidModel::uniform(1), 50, {r, 0, "sandwich"});
      const double exact = w1_exact_1d(emp, uni);
      const double approx = cost(emp, disc.measure, Metric::supremum);
      CHECK(std::abs(approx - exact) <= disc.error_bound + 1e-12);
    }
  }
  // Two depths of the same 2D reference differ by at most the sum of errors.
  const auto uni2 = ReferenceMeasure::uniform(Domain::cube(2));
  const auto coarse = discretize_reference(uni2, 2, 2);
  const auto fine = discretize_reference(uni2, 2, 4);
  const auto emp = sample_iid(IidModel::uniform(2), 32, {9, 0, "sandwich"});
  CHECK(std::abs(cost(emp, coarse.measure, Metric::supremum) -
                 cost(emp, fine.measure, Metric::supremum)) <=
        coarse.error_bound + fine.error_bound + 1e-12);
}

TEST_CASE("size guard and unsupported large instances") {
  Rng rng(7);
  const auto a = random_measure(1, 1001, rng, true);
  const auto b = random_measure(1, 1000, rng, true);
  CHECK_THROWS_AS(w1_exact_discrete(a, b, Metric::supremum), BudgetExceeded);
  TransportOptions o;
  o.max_pairs = 1u << 22;
  // Unequal weights beyond the transportation solver's reach.
  const auto c = random_measure(1, 600, rng, false);
  const auto e = random_measure(1, 600, rng, false);
  CHECK_THROWS_AS(w1_exact_discrete(c, e, Metric::supremum, o), BudgetExceeded);
  o.cost_exponent = 1.5;
  CHECK_THROWS_AS(w1_exact_discrete(a, a, Metric::supremum, o), InvalidArgument);
  CHECK_THROWS_AS(w1_exact_discrete(a, random_measure(2, 3, rng, true), Metric::supremum),
                  InvalidArgument);
}

TEST_CASE("large equal-weight instances dispatch to the scalable solvers") {
  const auto emp = sample_iid(IidModel::uniform(3), 16, {1, 0, "large"});
  const auto cube = ReferenceMeasure::uniform(Domain::cube(3));
  TransportOptions o;
  o.max_pairs = 1u << 30;
  const auto pd = w1_exact_discrete(emp, discretize_reference(cube, 2, 5).measure,
                                    Metric::supremum, o);
  CHECK(pd.solver == "primal_dual");
  CHECK(pd.optimality_gap <= 1e-9);
  CHECK(pd.feasibility_residual <= 1e-9);

  const auto grid = discretize_reference(cube, 2, 3).measure;
  o.solver = TransportSolver::primal_dual;
  const double a = w1_exact_discrete(emp, grid, Metric::supremum, o).cost;
  o.solver = TransportSolver::transportation;
  CHECK(a == doctest::Approx(w1_exact_discrete(emp, grid, Metric::supremum, o).cost).epsilon(1e-9));
}
