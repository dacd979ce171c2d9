// SPDX-License-Identifier: Apache-2.0
//
// mimowave: robust MIMO radar waveform design under target uncertainty
// Copyright (C) 2026 The mimowave authors
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

#include "mimowave/mm.hpp"

using namespace mimowave;

namespace {

Scenario scenario_for(int scale) {
    Scenario s = scale == 0 ? desk_scale(reference_scenario()) : reference_scenario();
    s.energy_budget = 1.25;
    s.seed = 1;
    return s;
}

ComplexMatrix start_point(const Scenario& s) {
    Rng rng = make_stream(s.seed, 0, 1);
    return random_init(s, rng);
}

void BM_TrsSolve(benchmark::State& state) {
    const Scenario s = scenario_for(static_cast<int>(state.range(0)));
    const TargetPrior prior = build_prior(s);
    const ComplexMatrix x = start_point(s);
    const QuadraticForm q = assemble_quadratic(surrogate_coefficients(x, prior, 1.0), prior, s.code_length, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(trs_solve(q.m_mat, q.m_vec, s.energy_budget));
}

void BM_MMIteration(benchmark::State& state) {
    const Scenario s = scenario_for(static_cast<int>(state.range(0)));
    const TargetPrior prior = build_prior(s);
    const ComplexMatrix x = start_point(s);
    for (auto _ : state) {
        const QuadraticForm q = assemble_quadratic(surrogate_coefficients(x, prior, 1.0), prior, s.code_length, 1.0);
        benchmark::DoNotOptimize(trs_solve(q.m_mat, q.m_vec, s.energy_budget));
    }
}

void BM_RelativeEntropy(benchmark::State& state) {
    const Scenario s = scenario_for(static_cast<int>(state.range(0)));
    const TargetPrior prior = build_prior(s);
    const ComplexMatrix x = start_point(s);
    for (auto _ : state) benchmark::DoNotOptimize(relative_entropy(x, prior, 1.0));
}

void BM_NpStatistic(benchmark::State& state) {
    const Scenario s = scenario_for(static_cast<int>(state.range(0)));
    const TargetPrior prior = build_prior(s);
    const DetectorSpec spec(start_point(s), prior, 1.0);
    Rng rng(3);
    const ComplexVector y = sample_noise(spec.dim(), 1.0, rng);
    for (auto _ : state) benchmark::DoNotOptimize(spec.statistic(y));
}

} // namespace

BENCHMARK(BM_TrsSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MMIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelativeEntropy)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NpStatistic)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
