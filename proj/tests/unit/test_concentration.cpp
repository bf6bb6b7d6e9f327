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
#include <vector>

#include "doctest.h"
#include "empdist/concentration.hpp"
#include "empdist/errors.hpp"
#include "empdist/rng.hpp"

using namespace empdist;

namespace {

double binomial_cdf(std::size_t R, double p, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    sum += std::exp(std::lgamma(R + 1.0) - std::lgamma(i + 1.0) - std::lgamma(R - i + 1.0) +
                    i * std::log(p) + (R - i) * std::log1p(-p));
  }
  return sum;
}

}  // namespace

TEST_CASE("tail bound evaluators") {
  CHECK(tail_bound_iid(0.0, 1000, 2) == 1.0);
  CHECK(tail_bound_iid(0.05, 1000, 2) == doctest::Approx(std::exp(-2.5)));
  CHECK(tail_bound_iid(0.05, 1000, 2) == doctest::Approx(0.08208).epsilon(1e-4));
  CHECK(tail_bound_iid(0.03, 2000, 3) ==
        doctest::Approx(std::pow(tail_bound_iid(0.03, 1000, 3), 2)).epsilon(1e-12));

  CHECK(tail_bound_markov(0.1, 1e4, 0.5, 1.0, 0.5) == doctest::Approx(std::exp(-50.0)));
  CHECK(tail_bound_markov(0.0, 1e4, 0.5, 1.0, 0.5) == 1.0);
  CHECK(tail_bound_markov(0.2, 50, 0.0, 1.0, 0.7) ==
        doctest::Approx(std::exp(-50 * 0.04 / (2 * 0.49))));

  const std::vector<double> four{1.0, 1.0, 1.0, 1.0};
  CHECK(azuma_rhs(four, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(azuma_rhs(four, 2.0) == doctest::Approx(0.13534).epsilon(1e-4));
  CHECK(azuma_rhs(four, 0.0) == 1.0);
  const std::vector<double> equal(10, 0.3);
  CHECK(azuma_rhs(equal, 0.5) == doctest::Approx(std::exp(-2 * 0.25 / (10 * 0.09))));
  CHECK_THROWS_AS(azuma_rhs(std::vector<double>{}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(azuma_rhs(std::vector<double>{1.0, 0.0}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(tail_bound_iid(-0.1, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(tail_bound_markov(0.1, 10, 1.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(tail_bound_markov(0.1, 10, 0.5, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("tail evaluators are nonincreasing in t and n") {
  const std::vector<double> ranges{0.5, 1.0, 0.25};
  for (double t = 0.0; t < 1.0; t += 0.05) {
    CHECK(tail_bound_iid(t + 0.05, 100, 2) <= tail_bound_iid(t, 100, 2));
    CHECK(tail_bound_iid(t, 200, 2) <= tail_bound_iid(t, 100, 2));
    CHECK(tail_bound_markov(t + 0.05, 100, 0.5, 1, 0.5) <= tail_bound_markov(t, 100, 0.5, 1, 0.5));
    CHECK(tail_bound_markov(t, 200, 0.5, 1, 0.5) <= tail_bound_markov(t, 100, 0.5, 1, 0.5));
    CHECK(azuma_rhs(ranges, t + 0.05) <= azuma_rhs(ranges, t));
  }
}

TEST_CASE("binomial quantile") {
  for (std::size_t R : {100u, 500u, 2000u}) {
    for (double p : {0.01, 0.08, 0.3}) {
      const std::size_t k = binomial_quantile(R, p, 0.95);
      CHECK(binomial_cdf(R, p, k) >= 0.95 - 1e-12);
      if (k > 0) CHECK(binomial_cdf(R, p, k - 1) < 0.95);
    }
  }
  CHECK(binomial_quantile(100, 0.0, 0.95) == 0);
  CHECK(binomial_quantile(100, 1.0, 0.95) == 100);
}

TEST_CASE("empirical tail check") {
  const std::vector<double> flat(200, 0.4);
  const auto none = empirical_tail_check(flat, 1e-9, 0.0);
  CHECK(none.exceed_count == 0);
  CHECK(none.empirical_frequency == 0.0);
  CHECK(none.passed);

  // Exactly 10% of the mass sits at 1, the rest at 0: mean 0.1 and t = 0.5
  // leave exactly the atoms at 1 above the threshold.
  std::vector<double> two(10000, 0.0);
  for (std::size_t i = 0; i < two.size(); i += 10) two[i] = 1.0;
  const auto r = empirical_tail_check(two, 0.5, 0.1);
  CHECK(r.empirical_mean == doctest::Approx(0.1));
  CHECK(r.exceed_count == 1000);
  CHECK(r.empirical_frequency == doctest::Approx(0.1));
  CHECK(r.passed);
  CHECK(r.binomial_slack > 0.0);
  CHECK_FALSE(empirical_tail_check(two, 0.5, 0.05).passed);

  // Random draws from the same two-point law stay within the slack.
  Rng rng(21);
  std::vector<double> draws(2000);
  for (double& x : draws) x = rng.uniform() < 0.1 ? 1.0 : 0.0;
  const auto d = empirical_tail_check(draws, 0.5, 0.1);
  CHECK(d.empirical_frequency == doctest::Approx(0.1).epsilon(0.25));
  CHECK(d.exceed_count <= d.replicates);

  CHECK_THROWS_AS(empirical_tail_check(flat, -0.1, 0.1), InvalidArgument);
  CHECK_THROWS_AS(empirical_tail_check(std::vector<double>(99, 0.0), 0.1, 0.1), InvalidArgument);
  CHECK_THROWS_AS(empirical_tail_check(flat, 0.1, 1.5), InvalidArgument);
}
