// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "khtile/counting.hpp"
#include "khtile/generators.hpp"
#include "khtile/harness.hpp"

using namespace khtile;

namespace {

void BM_GenRandom(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen_random(n, 0.1, seed++, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_CountK22(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = gen_random(n, 0.1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_k22(g, exec));
}

void BM_Sweep(benchmark::State& state) {
  TrialConfig cfg;
  cfg.gen.model = Model::kPerturbedLower;
  cfg.gen.alpha = 0.3;
  cfg.h = 1;
  cfg.n_list = {256};
  cfg.c_grid = geometric_grid(0.5, 4.0, 1.25);
  cfg.trials = 64;
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(cfg, workers));
}

}  // namespace

BENCHMARK_CAPTURE(BM_GenRandom, serial, Exec::kSerial)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_GenRandom, parallel, Exec::kParallel)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_CountK22, serial, Exec::kSerial)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_CountK22, parallel, Exec::kParallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
