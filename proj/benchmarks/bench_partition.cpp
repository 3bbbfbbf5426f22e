#include <benchmark/benchmark.h>

#include <random>

#include "lavanet/partition.hpp"
#include "lavanet/weights.hpp"

using namespace lavanet;

namespace {

SparseMatrix network(std::size_t nEx) {
  std::mt19937_64 rng(2);
  return initRandom(nEx, nEx / 4, 35, WeightDistribution::logNormal(20, 0.5),
                    WeightDistribution::logNormal(60, 0.5), rng)
      .full;
}

void BM_Split(benchmark::State& state) {
  const auto w = network(static_cast<std::size_t>(state.range(0)));
  const auto layout = computeLayout(w.rows(), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(split(w, layout));
}
BENCHMARK(BM_Split)->Args({400, 100})->Args({4000, 256})->Args({4000, 1024});

void BM_Merge(benchmark::State& state) {
  const auto w = network(static_cast<std::size_t>(state.range(0)));
  const auto grid = split(w, computeLayout(w.rows(), static_cast<std::size_t>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(merge(grid));
}
BENCHMARK(BM_Merge)->Args({400, 100})->Args({4000, 256})->Args({4000, 1024});

void BM_SpectralRadius(benchmark::State& state) {
  const auto w = network(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectralRadius(w));
}
BENCHMARK(BM_SpectralRadius)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
