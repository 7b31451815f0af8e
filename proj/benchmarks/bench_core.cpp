/*
 Copyright 2026 The switchopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "switchopt/builtin_models.hpp"
#include "switchopt/hammin.hpp"
#include "switchopt/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace switchopt;

const char* const kModels[] = {"double_tank", "mass_spring_damper", "unstable_lqr"};

EmbeddedControl start_control(const HybridModel& model, double dt) {
    return EmbeddedControl::uniform(model, TimeGrid::uniform(model.t_f, dt));
}

void BM_IntegrateState(benchmark::State& state) {
    const HybridModel model = builtin_model(kModels[state.range(0)]);
    const auto method = static_cast<Integrator>(state.range(1));
    const EmbeddedControl w = start_control(model, 0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_state(model, w, method));
    }
    state.SetLabel(kModels[state.range(0)]);
    state.SetItemsProcessed(state.iterations() * w.grid().steps());
}
BENCHMARK(BM_IntegrateState)->ArgsProduct({{0, 1, 2}, {0, 1}});

void BM_Costate(benchmark::State& state) {
    const HybridModel model = builtin_model(kModels[state.range(0)]);
    const auto method = static_cast<Integrator>(state.range(1));
    const EmbeddedControl w = start_control(model, 0.01);
    const Trajectory traj = integrate_state(model, w, method);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_costate(model, w, traj));
    }
    state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_Costate)->ArgsProduct({{0, 1, 2}, {0, 1}});

void BM_BuildUstar(benchmark::State& state) {
    const HybridModel model = builtin_model(kModels[state.range(0)]);
    const EmbeddedControl w = start_control(model, 0.01);
    const Trajectory traj = integrate_state(model, w, Integrator::Euler);
    const CostateTrajectory p = integrate_costate(model, w, traj);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_ustar(model, traj, p));
    }
    state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_BuildUstar)->DenseRange(0, 2);

void BM_Step(benchmark::State& state) {
    const HybridModel model = builtin_model(kModels[state.range(0)]);
    SolveConfig config;
    config.dt = 0.01;
    const EmbeddedControl w = start_control(model, config.dt);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(model, w, config));
    }
    state.SetLabel(kModels[state.range(0)]);
}
BENCHMARK(BM_Step)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_SolveDoubleTank(benchmark::State& state) {
    const HybridModel tank = builtin_model("double_tank");
    SolveConfig config;
    config.dt = 1.0 / static_cast<double>(state.range(0));
    config.max_iters = 50;
    config.armijo_alpha = 0.5;
    const EmbeddedControl w0 = EmbeddedControl::one_hot(tank, TimeGrid::uniform(tank.t_f, config.dt), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(tank, w0, config));
    }
}
BENCHMARK(BM_SolveDoubleTank)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
