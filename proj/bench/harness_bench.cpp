// Parallel trial loop against the serial reference on two workloads: E|det Q|^p
// (cheap trials) and pencil index arcs (expensive trials).

#include <benchmark/benchmark.h>

#include "betagap/montecarlo.hpp"
#include "betagap/quadrics.hpp"

using namespace betagap;

namespace {

void BM_AbsDetParallel(benchmark::State& state) {
  const EnsembleSpec spec{1.0, static_cast<std::size_t>(state.range(0)), 0};
  const RunConfig cfg{20'000, 1, static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(expected_abs_det_pow(spec, 1.0, cfg).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

void BM_AbsDetSerial(benchmark::State& state) {
  const EnsembleSpec spec{1.0, static_cast<std::size_t>(state.range(0)), 0};
  const RunConfig cfg{20'000, 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(expected_abs_det_pow_serial(spec, 1.0, cfg).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

template <bool Parallel>
void BM_PencilMu(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RunConfig cfg{2'048, 3, Parallel ? static_cast<int>(state.range(1)) : 1};
  auto trial = [&](Moments& acc, std::uint64_t t) {
    Stream st = Stream::for_trial(cfg.seed, t);
    acc.add(static_cast<double>(sample_pencil(n, st).mu));
  };
  for (auto _ : state) {
    const auto m = Parallel ? run_trials<Moments>(cfg, trial) : run_trials_serial<Moments>(cfg, trial);
    benchmark::DoNotOptimize(m.mean());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

}  // namespace

BENCHMARK(BM_AbsDetSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AbsDetParallel)->ArgsProduct({{4, 16}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PencilMu<false>)->Args({20, 1})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PencilMu<true>)->ArgsProduct({{20}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
