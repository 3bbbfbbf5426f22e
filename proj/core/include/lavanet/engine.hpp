#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lavanet/neuron.hpp"
#include "lavanet/partition.hpp"
#include "lavanet/plasticity.hpp"
#include "lavanet/scheduler.hpp"

namespace lavanet {

/// [start, end) range of global timesteps.
struct StepRange {
  long long start = 0;
  long long end = 0;

  bool contains(long long t) const { return t >= start && t < end; }
  bool operator==(const StepRange&) const = default;
};

/// External spike source. In each active step every target independently
/// receives a spike with probability spikeProb; a spike adds injectedWeight
/// to the target's current in that same step. Draws are a pure function of
/// (streamKey, target, step), so they do not depend on scheduling.
struct SpikeGenerator {
  std::vector<std::size_t> targetNeurons;
  std::vector<StepRange> activeWindows;
  double spikeProb = 0.0;
  double injectedWeight = 0.0;
  std::uint64_t streamKey = 0;

  bool activeAt(long long t) const;
  bool firesAt(std::size_t neuron, long long t) const;
};

/// Generator on `noiseNeurons` distinct, uniformly chosen reservoir neurons,
/// active over [0, totalSteps).
SpikeGenerator buildNoise(std::size_t noiseNeurons, std::size_t reservoirSize, double spikeProb,
                          double weight, long long totalSteps, std::uint64_t masterSeed);

/// State owned by one simulated core: its neurons and the row block of
/// chunks (this core <- every core) that feeds them.
struct CoreState {
  std::size_t index = 0;
  NeuronRange range;
  NeuronState neurons;
  std::vector<SparseMatrix> incoming;       // incoming[b] = chunk(index, b)
  std::vector<std::size_t> sourceOffsets;   // global index of core b's first neuron

  // (local neuron, generator index) pairs, ordered by generator then target.
  struct GeneratorTap {
    std::size_t local;
    std::size_t generator;
  };
  std::vector<GeneratorTap> taps;
  std::vector<double> external;
  std::vector<std::uint8_t> spikes;
};

/// One step of a core. Synaptic input of neuron i sums w(i <- j) over the
/// previous step's global spikes, source cores in order and columns in
/// order within each chunk, so the sum is identical for every layout.
void stepCore(CoreState& core, std::span<const std::uint8_t> previousSpikes,
              std::span<const double> externalCurrent, const NeuronConfig& config,
              std::span<std::uint8_t> localSpikes);

/// Receives per-core recordings. Called concurrently for different cores,
/// never concurrently for the same core.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void onCoreStep(std::size_t core, long long t, std::span<const std::uint8_t> localSpikes,
                          const NeuronState& neurons) = 0;
  virtual void onGeneratorSpike(std::size_t core, std::size_t generator, std::size_t neuron,
                                long long t) {
    (void)core, (void)generator, (void)neuron, (void)t;
  }
};

struct PlasticityConfig {
  RuleAst rule;
  TraceConfig traces;
  std::size_t plasticNeurons = 0;  // neurons [0, plasticNeurons) are plastic
  double weightMax = 0.0;
  int epoch = 1;                   // apply the rule every `epoch` steps
};

/// Multi-core reservoir simulation.
///
/// Each timestep runs in two barrier-separated phases over the cores:
///   1. external current from generators, LIF update, local traces, probes;
///   2. at learning-epoch boundaries, plasticity on each core's row block.
/// Spikes emitted at step t reach their targets at step t + 1.
class Simulation {
 public:
  Simulation(const ChunkGrid& weights, NeuronConfig config, std::size_t threads = 1);

  void setGenerators(std::vector<SpikeGenerator> generators);
  void enablePlasticity(const PlasticityConfig& config);
  void setObserver(StepObserver* observer) { observer_ = observer; }

  /// Advances to step t and returns the global spike vector of step t.
  std::span<const std::uint8_t> step(long long t);

  /// Zeroes voltages, currents, refractory counters and in-flight spikes;
  /// traces too if alsoResetTraces. Weights are untouched.
  void resetTrial(bool alsoResetTraces);

  /// Current weights, as a chunk grid over the same layout.
  ChunkGrid weights() const;

  const CoreLayout& layout() const { return layout_; }
  std::size_t coreCount() const { return cores_.size(); }
  const CoreState& core(std::size_t c) const { return cores_[c]; }
  std::size_t neuronCount() const { return layout_.neuronCount(); }
  const NeuronConfig& config() const { return config_; }
  const TraceState* traces() const { return plasticity_ ? &plasticity_->traces : nullptr; }
  std::span<const std::uint8_t> lastSpikes() const { return previous_; }
  std::size_t threads() const { return scheduler_.threads(); }

 private:
  struct Plasticity {
    PlasticityConfig config;
    CompiledRule rule;
    TraceState traces;
  };

  void stepPhase(std::size_t c, long long t);

  CoreLayout layout_;
  NeuronConfig config_;
  std::vector<CoreState> cores_;
  std::vector<SpikeGenerator> generators_;
  std::optional<Plasticity> plasticity_;
  StepObserver* observer_ = nullptr;
  std::vector<std::uint8_t> previous_;
  std::vector<std::uint8_t> current_;
  CoreScheduler scheduler_;
};

}  // namespace lavanet
