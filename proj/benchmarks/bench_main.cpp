#include <benchmark/benchmark.h>

#include "hawkes/moments.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulate.hpp"

namespace {

void bm_resolvent_solve(benchmark::State& state) {
    const auto kernel = hawkes::Kernel::exponential(1.0, 2.0);
    const auto grid =
        hawkes::Grid::with_horizon(10.0, 10.0 / static_cast<double>(state.range(0)));
    for (auto _ : state) {
        const auto table = hawkes::resolvent(kernel, grid);
        benchmark::DoNotOptimize(table.psi().back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_resolvent_solve)->Range(1000, 32000)->Complexity(benchmark::oNSquared);

void bm_cov_count(benchmark::State& state) {
    const hawkes::ModelParams params(1.0, hawkes::Kernel::exponential(1.0, 2.0));
    const auto table = hawkes::resolvent(params.kernel, hawkes::Grid::with_horizon(10.0, 1e-3));
    const hawkes::MomentEngine engine(params, table);
    double s = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.cov_count(s, 2.0 * s));
        s = s < 4.0 ? s + 1e-3 : 1.0;
    }
}
BENCHMARK(bm_cov_count);

void bm_simulate_path(benchmark::State& state) {
    const hawkes::ModelParams params(1.0, hawkes::Kernel::exponential(1.0, 2.0));
    const double horizon = static_cast<double>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto path = hawkes::simulate_hawkes(params, horizon, seed++);
        benchmark::DoNotOptimize(path.events.size());
    }
}
BENCHMARK(bm_simulate_path)->Arg(10)->Arg(100)->Arg(1000);

void bm_simulate_thinning(benchmark::State& state) {
    const hawkes::ModelParams params(1.0, hawkes::Kernel::exponential(1.0, 2.0));
    const double horizon = static_cast<double>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto path = hawkes::simulate_thinning(params, horizon, seed++);
        benchmark::DoNotOptimize(path.events.size());
    }
}
BENCHMARK(bm_simulate_thinning)->Arg(10)->Arg(100);

} // namespace

BENCHMARK_MAIN();
