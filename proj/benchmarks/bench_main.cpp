#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "superlattice/evolution.hpp"
#include "superlattice/hopper.hpp"
#include "superlattice/special_functions.hpp"
#include "superlattice/symbol.hpp"

namespace {

using namespace superlattice;

void BM_CirclePolylog(benchmark::State& state) {
  const special::CirclePolylog li(2.5);
  double p = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(li(p));
    p = p > 6.0 ? 0.1 : p + 0.37;
  }
}
BENCHMARK(BM_CirclePolylog);

void BM_SymbolGrid(benchmark::State& state) {
  const auto spec = symbol::SymbolSpec::infinite(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(symbol::symbol_grid(spec, state.range(0), 1));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_SymbolGrid)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_SpectralDelta(benchmark::State& state) {
  const auto spec = symbol::SymbolSpec::infinite(6.0);
  evolution::GridOptions options;
  options.n = state.range(0);
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(evolution::spectral_solve_delta(spec, 10.0, 20, options));
}
BENCHMARK(BM_SpectralDelta)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_HopperWalkers(benchmark::State& state) {
  hopper::HopperConfig config;
  config.s = 3.0;
  config.t_final = 10.0;
  config.n_walkers = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(hopper::simulate(config, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HopperWalkers)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
