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

// Microbenchmarks for the hot paths of the estimators and the transport oracle.

#include <benchmark/benchmark.h>

#include "empdist/dyadic_bound.hpp"
#include "empdist/fourier_bound.hpp"
#include "empdist/markov.hpp"
#include "empdist/samplers.hpp"
#include "empdist/transport.hpp"

namespace {

using namespace empdist;

void BM_SampleUniform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_iid(IidModel::uniform(3), n, {1, r++, "b"}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleUniform)->Arg(1 << 10)->Arg(1 << 15);

void BM_DyadicBound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const auto emp = sample_iid(IidModel::uniform(d), n, {2, 0, "b"});
  const auto ref = reference_for(IidModel::uniform(d));
  const int J = choose_depth(1.0, d, n).J;
  for (auto _ : state) benchmark::DoNotOptimize(dyadic_wq_bound(emp, ref, 1.0, J));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DyadicBound)->Args({1 << 10, 2})->Args({1 << 14, 2})->Args({1 << 15, 3});

void BM_CantorRestricted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto emp = sample_iid(IidModel::cantor(), n, {3, 0, "b"});
  const auto ref = reference_for(IidModel::cantor());
  const int J = choose_depth(0.5, 1.0, n, 4).J;
  for (auto _ : state) benchmark::DoNotOptimize(dyadic_wq_bound(emp, ref, 0.5, J, 4, true));
}
BENCHMARK(BM_CantorRestricted)->Arg(1 << 8)->Arg(1 << 14);

void BM_FourierBound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kernel = MarkovKernelSpec::inverse_doubling();
  const auto run = sample_chain({kernel, n, {}, {4, 0, "b"}});
  const auto J = choose_J_fourier(1.0, 1, n, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs_dual_bound(run.empirical, *kernel.stationary_ref(), {1.0, J.J, 1.0}));
  }
}
BENCHMARK(BM_FourierBound)->Arg(1 << 10)->Arg(1 << 14);

void BM_Transport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto solver = static_cast<TransportSolver>(state.range(1));
  const auto a = sample_iid(IidModel::uniform(2), n, {5, 0, "b"});
  const auto b = sample_iid(IidModel::uniform(2), n, {5, 1, "b"});
  TransportOptions opt;
  opt.solver = solver;
  for (auto _ : state) benchmark::DoNotOptimize(w1_exact_discrete(a, b, Metric::euclidean, opt));
}
BENCHMARK(BM_Transport)
    ->Args({128, static_cast<int>(TransportSolver::assignment)})
    ->Args({128, static_cast<int>(TransportSolver::transportation)})
    ->Args({128, static_cast<int>(TransportSolver::auction)})
    ->Args({128, static_cast<int>(TransportSolver::primal_dual)})
    ->Unit(benchmark::kMillisecond);

void BM_FewSinks(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto emp = sample_iid(IidModel::uniform(3), 128, {6, 0, "b"});
  const auto grid = discretize_reference(reference_for(IidModel::uniform(3)), 2, depth).measure;
  TransportOptions opt;
  opt.max_pairs = std::uint64_t{1} << 30;
  for (auto _ : state) benchmark::DoNotOptimize(w1_exact_discrete(emp, grid, Metric::supremum, opt));
}
BENCHMARK(BM_FewSinks)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Exact1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto emp = sample_iid(IidModel::uniform(1), n, {7, 0, "b"});
  const auto ref = reference_for(IidModel::uniform(1));
  for (auto _ : state) benchmark::DoNotOptimize(w1_exact_1d(emp, ref));
}
BENCHMARK(BM_Exact1D)->Arg(1 << 10)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
