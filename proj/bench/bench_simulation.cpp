/*
* Copyright (C) 2026 rthome contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
// Serial reference loop versus the OpenMP map over homes.
//
//   ./bench_simulation --benchmark_counters_tabular=true
//
// OMP_NUM_THREADS controls the parallel variant; on a single core both paths
// should take the same time.

#include "rthome/dynamics.h"
#include "rthome/equilibrium.h"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

namespace
{

using namespace rthome;

struct Setup {
    Grid grid{{0.0, 1.0, 0.0, 1.0}, 50, 50};
    ModelParams params;
    HomeSet homes;

    explicit Setup(std::size_t count)
        : homes(grid, {params.sigma}, make_homes(count))
    {
    }

    static std::vector<Home> make_homes(std::size_t count)
    {
        std::mt19937_64 rng(2023);
        std::uniform_real_distribution<double> pos(0.0, 1.0);
        std::vector<Home> h;
        for (std::size_t k = 0; k < count; ++k) {
            h.push_back({{pos(rng), pos(rng)}, 100.0, 0});
        }
        return h;
    }
};

void run(benchmark::State& state, Execution execution)
{
    const Setup setup(static_cast<std::size_t>(state.range(0)));
    RunOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 0.05;
    opt.output_interval = 0.01;
    opt.execution = execution;
    for (auto _ : state) {
        auto traj = run_simulation(setup.grid, setup.params, {}, setup.homes, opt);
        benchmark::DoNotOptimize(traj.global.back().u);
    }
    state.counters["home_steps/s"] = benchmark::Counter(
        static_cast<double>(state.range(0)) * 50.0 * static_cast<double>(state.iterations()),
        benchmark::Counter::kIsRate);
    state.counters["threads"] = execution == Execution::parallel ? omp_get_max_threads() : 1;
}

void equilibria(benchmark::State& state, Execution execution)
{
    const Setup setup(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto eqs = field_equilibria(setup.grid, setup.homes, setup.params, execution);
        benchmark::DoNotOptimize(eqs.back().u);
    }
}

void BM_simulation_serial(benchmark::State& s)
{
    run(s, Execution::serial);
}
void BM_simulation_parallel(benchmark::State& s)
{
    run(s, Execution::parallel);
}
void BM_equilibria_serial(benchmark::State& s)
{
    equilibria(s, Execution::serial);
}
void BM_equilibria_parallel(benchmark::State& s)
{
    equilibria(s, Execution::parallel);
}

} // namespace

BENCHMARK(BM_simulation_serial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulation_parallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_equilibria_serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_equilibria_parallel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
