// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - rate-splitting multi-pair massive MIMO relay simulator
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


// Serial reference against the OpenMP fan-out, on the per-draw kernel and on a whole sweep.

#include "rsrelay/experiments.hpp"
#include "rsrelay/montecarlo.hpp"

#include <benchmark/benchmark.h>

using namespace rsrelay;

namespace
{

SystemConfig bench_config(int M)
{
    SystemConfig c;
    c.K = M / 8;
    c.M = M;
    c.N = M;
    c.tau = std::max(2 * c.K, 8);
    c.rho = db_to_linear(20.0);
    c.lambda_draws = 50;
    return c;
}

void run_draws(benchmark::State& state, Execution exec)
{
    const auto c = bench_config(static_cast<int>(state.range(0)));
    const auto p = uniform_profile(c, 1.0);
    const auto lt = long_term_params(c, p, 1);
    const int n = 64;
    for (auto _ : state)
    {
        auto d = exec == Execution::Serial ? run_draws_serial(c, p, lt, n, 1) : run_draws_parallel(c, p, lt, n, 1);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_DrawsSerial(benchmark::State& s) { run_draws(s, Execution::Serial); }
void BM_DrawsParallel(benchmark::State& s) { run_draws(s, Execution::Parallel); }

BENCHMARK(BM_DrawsSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DrawsParallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state)
{
    SweepSpec s;
    s.name = "bench";
    s.values = {0, 10, 20, 30};
    s.base = bench_config(32);
    s.n_draws = 32;
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep(s, workers).size());
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
