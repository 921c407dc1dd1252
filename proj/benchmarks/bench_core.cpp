// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The stia-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "stia/analysis.hpp"
#include "stia/protocol.hpp"
#include "stia/scheduler.hpp"

namespace {

stia::ComplexMatrix random_matrix(std::size_t n, stia::StreamRng& rng) {
    stia::ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.complex_gaussian();
    }
    return m;
}

void BM_SolveRight(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    stia::StreamRng rng(1);
    const auto a = random_matrix(n, rng);
    const auto b = random_matrix(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stia::solve_right(a, b));
    }
}
BENCHMARK(BM_SolveRight)->DenseRange(2, 5);

void BM_ConditionEstimate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    stia::StreamRng rng(2);
    const auto a = random_matrix(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stia::condition_estimate(a));
    }
}
BENCHMARK(BM_ConditionEstimate)->DenseRange(2, 5);

void BM_BuildStiaPrecoders(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const auto ch = stia::draw_round_channels(k, 3, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stia::build_stia_precoders(ch.phase_two[0], ch.reference, k));
    }
}
BENCHMARK(BM_BuildStiaPrecoders)->DenseRange(3, 6);

void BM_NoiseFreeRound(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::uint64_t round = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stia::run_random_stia_round(k, 4, round++, stia::RoundConfig{}));
    }
}
BENCHMARK(BM_NoiseFreeRound)->DenseRange(3, 6);

void BM_BuildPlan(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(stia::build_plan_general(4, state.range(0)));
    }
}
BENCHMARK(BM_BuildPlan)->Arg(32)->Arg(1024);

void BM_SimulateTrials(benchmark::State& state) {
    stia::SimulationConfig cfg;
    cfg.trials = state.range(0);
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stia::simulate_sum_rates(cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTrials)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
