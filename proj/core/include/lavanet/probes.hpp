#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lavanet/engine.hpp"
#include "lavanet/neuron.hpp"
#include "lavanet/partition.hpp"

namespace lavanet {

/// A spike (or generator event) as (global step, neuron index).
struct SpikeEvent {
  long long step = 0;
  std::size_t neuron = 0;

  auto operator<=>(const SpikeEvent&) const = default;
};

/// Boolean neurons x steps matrix.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(std::size_t neurons, long long steps)
      : neurons_(neurons), steps_(steps), bits_(neurons * static_cast<std::size_t>(steps), 0) {}

  std::size_t neurons() const { return neurons_; }
  long long steps() const { return steps_; }
  bool at(std::size_t neuron, long long t) const { return bits_[offset(neuron, t)] != 0; }
  void set(std::size_t neuron, long long t, bool value = true) {
    bits_[offset(neuron, t)] = value ? 1 : 0;
  }
  std::span<const std::uint8_t> row(std::size_t neuron) const {
    return std::span<const std::uint8_t>(bits_).subspan(offset(neuron, 0),
                                                        static_cast<std::size_t>(steps_));
  }
  std::size_t count() const;
  std::size_t countInRange(std::size_t firstNeuron, std::size_t lastNeuron) const;

  /// Spikes of neurons [firstNeuron, lastNeuron) sorted by step, then neuron.
  std::vector<SpikeEvent> events(std::size_t firstNeuron, std::size_t lastNeuron) const;

  /// Copy of steps [first, last).
  SpikeRaster slice(long long first, long long last) const;

  bool operator==(const SpikeRaster&) const = default;

 private:
  std::size_t offset(std::size_t neuron, long long t) const {
    return neuron * static_cast<std::size_t>(steps_) + static_cast<std::size_t>(t);
  }

  std::size_t neurons_ = 0;
  long long steps_ = 0;
  std::vector<std::uint8_t> bits_;  // row-major by neuron
};

/// Spike of a core-local neuron.
struct LocalSpike {
  std::size_t local = 0;
  long long step = 0;

  bool operator==(const LocalSpike&) const = default;
};

/// Generator-driven spike delivered to a reservoir neuron.
struct GeneratorEvent {
  std::size_t generator = 0;
  std::size_t neuron = 0;
  long long step = 0;

  auto operator<=>(const GeneratorEvent&) const = default;
};

/// Whole-network datasets assembled after a run.
struct ProbeData {
  SpikeRaster raster;                          // reservoirSize x totalSteps
  std::vector<SparseMatrix> weights;           // one merged matrix per snapshot
  std::vector<std::vector<double>> voltages;   // voltages[neuron][step], if probed
  std::vector<GeneratorEvent> generatorEvents; // sorted by (generator, neuron, step)
};

/// Per-core recording channels. Each core only ever writes its own
/// buffers, so recording needs no locking.
class ProbeStore : public StepObserver {
 public:
  /// Records steps [firstStep, firstStep + totalSteps); raster column 0 is
  /// firstStep.
  ProbeStore(CoreLayout layout, long long totalSteps, bool recordVoltage = false,
             bool recordGenerators = true, long long firstStep = 0);

  /// Appends the spikes of one core step. Steps must increase per core.
  void recordStep(std::size_t core, std::span<const std::uint8_t> localSpikes, long long t);

  void onCoreStep(std::size_t core, long long t, std::span<const std::uint8_t> localSpikes,
                  const NeuronState& neurons) override;
  void onGeneratorSpike(std::size_t core, std::size_t generator, std::size_t neuron,
                        long long t) override;

  void addWeightSnapshot(ChunkGrid weights) { snapshots_.push_back(std::move(weights)); }
  const std::vector<ChunkGrid>& weightSnapshots() const { return snapshots_; }

  const std::vector<LocalSpike>& coreBuffer(std::size_t core) const { return cores_[core].spikes; }
  long long stepsRecorded(std::size_t core) const { return cores_[core].stepsRecorded; }
  const CoreLayout& layout() const { return layout_; }
  long long totalSteps() const { return totalSteps_; }
  long long firstStep() const { return firstStep_; }

  /// Stacks the per-core buffers. Throws IncompleteRun if any core recorded
  /// fewer or more than totalSteps steps.
  ProbeData postProcess() const;

 private:
  struct CoreBuffers {
    std::vector<LocalSpike> spikes;
    std::vector<double> voltages;  // [step][local]
    std::vector<GeneratorEvent> generatorEvents;
    long long stepsRecorded = 0;
    long long lastStep = 0;
    bool started = false;
  };

  CoreLayout layout_;
  long long totalSteps_;
  long long firstStep_;
  bool recordVoltage_;
  bool recordGenerators_;
  std::vector<CoreBuffers> cores_;
  std::vector<ChunkGrid> snapshots_;
};

/// Splits the raster back into the local buffer of one core.
std::vector<LocalSpike> destack(const SpikeRaster& raster, const CoreLayout& layout,
                                std::size_t core);

/// Contiguous, near-equal partition of n indices into `parts` blocks; block
/// sizes differ by at most one, larger blocks first.
std::vector<NeuronRange> contiguousBlocks(std::size_t n, std::size_t parts);

/// Output layer: output neuron k sums the spikes of excitatory pool k.
class PoolingReadout {
 public:
  PoolingReadout(std::size_t excitatoryCount, std::size_t outputSize, double outputWeight,
                 NeuronConfig config);

  const std::vector<NeuronRange>& pools() const { return pools_; }
  std::size_t size() const { return pools_.size(); }
  const NeuronState& state() const { return state_; }

  /// Feeds outputWeight * (spikes in pool k) to output k and advances one
  /// step. `exSpikes` covers at least the excitatory population.
  std::vector<std::uint8_t> poolAndStep(std::span<const std::uint8_t> exSpikes);

  void reset() { state_.reset(); }

 private:
  std::vector<NeuronRange> pools_;
  double outputWeight_;
  NeuronConfig config_;
  NeuronState state_;
};

/// Centered moving average over `windowSize` steps (window [t - (w-1)/2,
/// t + w/2]); near the edges the sum is divided by the number of steps that
/// actually fall inside the row.
std::vector<double> smoothSpikes(std::span<const double> row, std::size_t windowSize);
std::vector<double> smoothSpikes(std::span<const std::uint8_t> row, std::size_t windowSize);

/// Spike list as text, one `step,neuron` line per spike, no header.
void writeSpikeCsv(std::ostream& out, const std::vector<SpikeEvent>& events);
void writeSpikeCsv(const std::string& path, const std::vector<SpikeEvent>& events);
/// Throws Error on unreadable files or malformed lines.
std::vector<SpikeEvent> readSpikeCsv(std::istream& in);
std::vector<SpikeEvent> readSpikeCsv(const std::string& path);

}  // namespace lavanet
