// Copyright 2026 The shiftconv Authors
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

#include <benchmark/benchmark.h>

#include <bit>
#include <cstdint>

#include "shiftconv/arcs.hpp"
#include "shiftconv/coefficients.hpp"
#include "shiftconv/expsum.hpp"
#include "shiftconv/sums.hpp"

namespace {

using namespace shiftconv;

const CoefficientTable& lambda_table() {
  static const CoefficientTable lam = normalize_gl2(compute_tau(std::size_t{1} << 18));
  return lam;
}

void BM_ComputeTau(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_tau(n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeTau)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond)->Complexity();

void BM_AveragedShiftedSum(benchmark::State& state) {
  const auto& lam = lambda_table();
  const auto X = static_cast<std::uint64_t>(state.range(0));
  const auto H = static_cast<std::uint64_t>(state.range(1));
  const ShiftedSumSpec spec{X, H, lam, lam, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(averaged_shifted_sum(spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(X * H));
}
BENCHMARK(BM_AveragedShiftedSum)->Args({1 << 12, 64})->Args({1 << 14, 128})->Args({1 << 16, 256});

void BM_ReorderedAverage(benchmark::State& state) {
  const auto& lam = lambda_table();
  const PartialSumTable partial(lam);
  const auto X = static_cast<std::uint64_t>(state.range(0));
  const auto H = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reordered_average(lam, partial, X, H));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(X));
}
BENCHMARK(BM_ReorderedAverage)->Args({1 << 12, 64})->Args({1 << 14, 128})->Args({1 << 16, 256});

void BM_ExpSumGrid(benchmark::State& state) {
  const auto& lam = lambda_table();
  const auto X = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t G = std::bit_ceil(8 * X);
  for (auto _ : state) benchmark::DoNotOptimize(exp_sum_grid(lam, X, G));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExpSumGrid)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_DirichletDissection(benchmark::State& state) {
  const auto Q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_dissection(Q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DirichletDissection)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNSquared);

void BM_CheckDissection(benchmark::State& state) {
  const auto d = dirichlet_dissection(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_dissection(d));
}
BENCHMARK(BM_CheckDissection)->Arg(50)->Arg(200);

void BM_ArcDecomposition(benchmark::State& state) {
  const auto& lam = lambda_table();
  const auto X = static_cast<std::uint64_t>(state.range(0));
  const auto Q = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(arc_decomposed_average(lam, lam, X, 64, Q, std::bit_ceil(8 * X)));
  }
}
BENCHMARK(BM_ArcDecomposition)->Args({1 << 12, 16})->Args({1 << 14, 32})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
