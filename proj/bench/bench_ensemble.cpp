#include <benchmark/benchmark.h>

#include "volharvest/simulation.hpp"

using namespace volharvest;

namespace {

Market gaussian() { return GaussianParams::symmetric(1.0, 0.02, 0.3, 1000); }

void BM_Reference(benchmark::State& state) {
    const auto market = gaussian();
    for (auto _ : state) {
        auto e = run_ensemble_reference(market, StrategySpec::balanced(), state.range(0), 1);
        benchmark::DoNotOptimize(e.terminal_wealth.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}

void BM_Kernel(benchmark::State& state) {
    const auto market = gaussian();
    EnsembleOptions opt;
    opt.workers = int(state.range(1));
    for (auto _ : state) {
        auto e = run_ensemble(market, StrategySpec::balanced(), state.range(0), 1, opt);
        benchmark::DoNotOptimize(e.terminal_wealth.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}

}  // namespace

BENCHMARK(BM_Reference)->Arg(2000)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kernel)->Args({2000, 1})->Args({2000, 2})->Args({2000, 4})->Args({2000, 8})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
