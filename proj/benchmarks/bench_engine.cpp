#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "lavanet/engine.hpp"
#include "lavanet/weights.hpp"

using namespace lavanet;

namespace {

std::unique_ptr<Simulation> makeSimulation(std::size_t nEx, std::size_t perCore, std::size_t threads, bool plastic) {
  std::mt19937_64 rng(1);
  const auto w = initRandom(nEx, nEx / 4, 35, WeightDistribution::logNormal(20, 0.5),
                            WeightDistribution::logNormal(60, 0.5), rng);
  auto sim = std::make_unique<Simulation>(split(w.full, computeLayout(w.size(), perCore)),
                                          NeuronConfig{}, threads);
  SpikeGenerator drive;
  for (std::size_t i = 0; i < nEx; i += 4) drive.targetNeurons.push_back(i);
  drive.activeWindows = {{0, 1LL << 40}};
  drive.spikeProb = 0.5;
  drive.injectedWeight = 500.0;
  drive.streamKey = 7;
  sim->setGenerators({drive});
  if (plastic) {
    PlasticityConfig pc;
    pc.rule = parseRule("2^-2*x1*y0 - 2^-2*y1*x0 + 2^-4*x1*y1*y0 - 2^-3*y0*w*w");
    pc.plasticNeurons = nEx;
    pc.weightMax = 40.0;
    sim->enablePlasticity(pc);
  }
  return sim;
}

void BM_Step(benchmark::State& state) {
  auto sim = makeSimulation(static_cast<std::size_t>(state.range(0)),
                            static_cast<std::size_t>(state.range(1)), 1, state.range(2) != 0);
  long long t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim->step(t++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)
    ->ArgNames({"nEx", "perCore", "plastic"})
    ->Args({400, 500, 0})
    ->Args({400, 128, 0})
    ->Args({400, 128, 1})
    ->Args({3200, 1024, 0});

void BM_StepThreads(benchmark::State& state) {
  auto sim = makeSimulation(3200, 500, static_cast<std::size_t>(state.range(0)), false);
  long long t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim->step(t++));
}
BENCHMARK(BM_StepThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

}  // namespace
