// Copyright 2026 The qmux Authors
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

#include <random>

#include "qmux/phase_matching.hpp"
#include "qmux/quantum_stats.hpp"
#include "qmux/trial_engine.hpp"

namespace {

using namespace qmux;

void BM_RunBatch(benchmark::State& state) {
    RunPlan plan;
    plan.config.m = static_cast<int>(state.range(0));
    plan.settings = chsh_setting_pairs();
    plan.n_trials = 250'000;
    plan.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_batch(plan).heralds);
    state.SetItemsProcessed(state.iterations() * 4 * 250'000);
}
BENCHMARK(BM_RunBatch)->Arg(1)->Arg(19)->Unit(benchmark::kMillisecond);

void BM_TrialKernel(benchmark::State& state) {
    const TrialKernel kernel(ExperimentConfig{}, 0.7, hv_setting_pair());
    std::uint64_t t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.run(CounterStream::for_trial(1, 0, t), t));
        ++t;
    }
}
BENCHMARK(BM_TrialKernel);

Matrix4c noisy_werner() {
    Matrix4c rho = werner_state(45.0, 0.81).matrix();
    rho(0, 3) += Complex(0.02, 0.01);
    rho(3, 0) += Complex(0.02, -0.01);
    return rho;
}

void BM_TomographyPipeline(benchmark::State& state) {
    const auto weights =
        exact_outcome_weights(werner_state(45.0, 0.81), tomography_setting_pairs());
    const auto target = bell_state(45.0);
    for (auto _ : state) {
        const auto rho = project_physical(tomo_reconstruct(weights));
        benchmark::DoNotOptimize(fidelity(rho, target));
    }
}
BENCHMARK(BM_TomographyPipeline);

void BM_ProjectPhysical(benchmark::State& state) {
    const Matrix4c rho = noisy_werner();
    for (auto _ : state) benchmark::DoNotOptimize(project_physical(rho));
}
BENCHMARK(BM_ProjectPhysical);

void BM_Fidelity(benchmark::State& state) {
    const auto a = werner_state(45.0, 0.81);
    const auto b = bell_state(30.0);
    for (auto _ : state) benchmark::DoNotOptimize(fidelity(a, b));
}
BENCHMARK(BM_Fidelity);

void BM_ScanGeometry(benchmark::State& state) {
    std::vector<double> fan;
    for (int i = 0; i < state.range(0); ++i) fan.push_back(-9.0 + 0.5 * i + 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(scan_geometry({fan, 0.0}).nondirectional_count);
}
BENCHMARK(BM_ScanGeometry)->Arg(19)->Arg(36);

}  // namespace

BENCHMARK_MAIN();
