#include "lavanet/engine.hpp"

#include <algorithm>
#include <random>

#include "lavanet/errors.hpp"
#include "lavanet/rng.hpp"

namespace lavanet {

namespace {

constexpr std::uint64_t kNoiseGeneratorIndex = 0x6e6f697365ULL;  // "noise"

}  // namespace

bool SpikeGenerator::activeAt(long long t) const {
  return std::any_of(activeWindows.begin(), activeWindows.end(),
                     [t](const StepRange& w) { return w.contains(t); });
}

bool SpikeGenerator::firesAt(std::size_t neuron, long long t) const {
  return rng::counterUniform(streamKey, neuron, static_cast<std::uint64_t>(t)) < spikeProb;
}

SpikeGenerator buildNoise(std::size_t noiseNeurons, std::size_t reservoirSize, double spikeProb,
                          double weight, long long totalSteps, std::uint64_t masterSeed) {
  if (noiseNeurons > reservoirSize) {
    throw ShapeMismatch("noiseNeurons exceeds the reservoir size");
  }
  SpikeGenerator noise;
  noise.spikeProb = spikeProb;
  noise.injectedWeight = weight;
  noise.streamKey = rng::streamKey(masterSeed, rng::StreamKind::kGenerator, kNoiseGeneratorIndex);
  if (noiseNeurons == 0) return noise;
  auto engine = rng::makeEngine(masterSeed, rng::StreamKind::kNoisePlacement);
  std::vector<std::size_t> all(reservoirSize);
  for (std::size_t i = 0; i < reservoirSize; ++i) all[i] = i;
  std::sample(all.begin(), all.end(), std::back_inserter(noise.targetNeurons), noiseNeurons,
              engine);
  noise.activeWindows.push_back({0, totalSteps});
  return noise;
}

void stepCore(CoreState& core, std::span<const std::uint8_t> previousSpikes,
              std::span<const double> externalCurrent, const NeuronConfig& config,
              std::span<std::uint8_t> localSpikes) {
  const std::size_t n = core.range.size();
  for (std::size_t i = 0; i < n; ++i) {
    double synaptic = 0.0;
    for (std::size_t b = 0; b < core.incoming.size(); ++b) {
      const auto row = core.incoming[b].row(i);
      const std::uint8_t* source = previousSpikes.data() + core.sourceOffsets[b];
      for (std::size_t k = 0; k < row.columns.size(); ++k) {
        if (source[row.columns[k]]) synaptic += row.values[k];
      }
    }
    const double input = synaptic + externalCurrent[i];
    localSpikes[i] = stepNeuron(core.neurons, i, input, config) ? 1 : 0;
  }
}

Simulation::Simulation(const ChunkGrid& weights, NeuronConfig config, std::size_t threads)
    : layout_(weights.layout()),
      config_(config),
      previous_(weights.layout().neuronCount(), 0),
      current_(weights.layout().neuronCount(), 0),
      scheduler_(threads) {
  weights.checkShapes();
  const std::size_t cores = layout_.coreCount();
  cores_.resize(cores);
  for (std::size_t a = 0; a < cores; ++a) {
    CoreState& core = cores_[a];
    core.index = a;
    core.range = layout_.ranges[a];
    core.neurons = NeuronState(core.range.size());
    core.external.assign(core.range.size(), 0.0);
    for (std::size_t b = 0; b < cores; ++b) {
      core.incoming.push_back(weights.chunk(a, b));
      core.sourceOffsets.push_back(layout_.ranges[b].begin);
    }
  }
}

void Simulation::setGenerators(std::vector<SpikeGenerator> generators) {
  generators_ = std::move(generators);
  for (auto& core : cores_) core.taps.clear();
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    for (std::size_t neuron : generators_[g].targetNeurons) {
      if (neuron >= neuronCount()) throw ShapeMismatch("generator target outside the reservoir");
      auto& core = cores_[layout_.coreOf(neuron)];
      core.taps.push_back({neuron - core.range.begin, g});
    }
  }
}

void Simulation::enablePlasticity(const PlasticityConfig& config) {
  if (config.epoch < 1) throw Error("learning epoch must be >= 1");
  plasticity_.emplace(Plasticity{config, CompiledRule(config.rule),
                                 TraceState(std::min(config.plasticNeurons, neuronCount()))});
}

void Simulation::stepPhase(std::size_t c, long long t) {
  CoreState& core = cores_[c];
  std::fill(core.external.begin(), core.external.end(), 0.0);
  for (const auto& tap : core.taps) {
    const SpikeGenerator& gen = generators_[tap.generator];
    const std::size_t neuron = core.range.begin + tap.local;
    if (gen.activeAt(t) && gen.firesAt(neuron, t)) {
      core.external[tap.local] += gen.injectedWeight;
      if (observer_) observer_->onGeneratorSpike(c, tap.generator, neuron, t);
    }
  }
  auto local = std::span<std::uint8_t>(current_).subspan(core.range.begin, core.range.size());
  stepCore(core, previous_, core.external, config_, local);
  if (plasticity_) updateTraces(plasticity_->traces, local, core.range.begin, plasticity_->config.traces);
  if (observer_) observer_->onCoreStep(c, t, local, core.neurons);
}

std::span<const std::uint8_t> Simulation::step(long long t) {
  scheduler_.parallelFor(cores_.size(), [&](std::size_t c) { stepPhase(c, t); });

  if (plasticity_ && (t + 1) % plasticity_->config.epoch == 0) {
    scheduler_.parallelFor(cores_.size(), [&](std::size_t c) {
      CoreState& core = cores_[c];
      for (std::size_t b = 0; b < core.incoming.size(); ++b) {
        applyRule(plasticity_->rule, core.incoming[b], core.range.begin, core.sourceOffsets[b],
                  plasticity_->traces, plasticity_->config.plasticNeurons,
                  plasticity_->config.weightMax);
      }
    });
    plasticity_->traces.clearEpoch();
  }
  std::swap(previous_, current_);
  return previous_;
}

void Simulation::resetTrial(bool alsoResetTraces) {
  for (auto& core : cores_) core.neurons.reset();
  std::fill(previous_.begin(), previous_.end(), 0);
  std::fill(current_.begin(), current_.end(), 0);
  if (plasticity_ && alsoResetTraces) plasticity_->traces.reset();
}

ChunkGrid Simulation::weights() const {
  std::vector<SparseMatrix> chunks;
  chunks.reserve(cores_.size() * cores_.size());
  for (const auto& core : cores_) {
    for (const auto& chunk : core.incoming) chunks.push_back(chunk);
  }
  return ChunkGrid(layout_, std::move(chunks));
}

}  // namespace lavanet
