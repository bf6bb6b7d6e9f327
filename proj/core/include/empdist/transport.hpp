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

#include <cstdint>
#include <string>

#include "empdist/discrete_measure.hpp"
#include "empdist/domain.hpp"
#include "empdist/reference_measure.hpp"

namespace empdist {

/// Outcome of an exact discrete transport solve.
struct TransportPlanSummary {
  /// Cost of the returned plan: sum of pi_ij * c_ij. Never below the optimum.
  double cost = 0.0;
  /// Number of atom pairs carrying positive mass.
  std::size_t support_size = 0;
  /// Max marginal violation of the plan.
  double feasibility_residual = 0.0;
  /// cost minus the value of a feasible dual solution; a certificate that
  /// cost - optimum <= optimality_gap.
  double optimality_gap = 0.0;
  std::string solver;
};

enum class TransportSolver { automatic, assignment, transportation, auction, primal_dual };

struct TransportOptions {
  /// Refuse instances with more than this many atom pairs.
  std::uint64_t max_pairs = 1'000'000;
  /// Ground cost is distance^cost_exponent; values in (0,1] give W_q.
  double cost_exponent = 1.0;
  TransportSolver solver = TransportSolver::automatic;
  /// Target optimality gap for the auction solver.
  double auction_tolerance = 1e-10;
};

/// W1 on [0,1] as the integral of |F_a - F_b|, integrated segment by segment
/// between the merged breakpoints of both distribution functions. References
/// must expose a CDF. Throws InvalidArgument unless d = 1.
double w1_exact_1d(const DiscreteMeasure& a, const DiscreteMeasure& b);
double w1_exact_1d(const DiscreteMeasure& a, const ReferenceMeasure& b);
double w1_exact_1d(const ReferenceMeasure& a, const DiscreteMeasure& b);
double w1_exact_1d(const ReferenceMeasure& a, const ReferenceMeasure& b);

/// Minimum-cost transport between two atom sets in [0,1)^d under the given
/// norm (no torus wrap). Equal-size equal-weight inputs go to the Hungarian
/// method and moderate general inputs to successive shortest paths. Large
/// equal-weight inputs whose smaller side divides the larger go to a
/// primal-dual method over the smaller side's prices; the rest to an
/// epsilon-scaling auction. The large-instance solvers report the gap to a
/// dual solution as a certificate.
TransportPlanSummary w1_exact_discrete(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                       Metric metric, const TransportOptions& options = {});

struct Discretization {
  DiscreteMeasure measure;
  /// Certified bound on W1(ref, measure): half the cell diameter.
  double error_bound;
};

/// One atom at the center of every positive-mass cell, weighted by the cell
/// mass. Uses the support oracle when the reference has one.
Discretization discretize_reference(const ReferenceMeasure& ref, int base, int depth,
                                    Metric metric = Metric::supremum,
                                    std::uint64_t budget = kDefaultCellBudget);

}  // namespace empdist
