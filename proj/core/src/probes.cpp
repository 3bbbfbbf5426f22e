#include "lavanet/probes.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string>

#include "lavanet/errors.hpp"

namespace lavanet {

std::size_t SpikeRaster::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t SpikeRaster::countInRange(std::size_t firstNeuron, std::size_t lastNeuron) const {
  const auto begin = bits_.begin() + static_cast<long>(offset(firstNeuron, 0));
  const auto end = bits_.begin() + static_cast<long>(offset(lastNeuron, 0));
  return static_cast<std::size_t>(std::count(begin, end, std::uint8_t{1}));
}

std::vector<SpikeEvent> SpikeRaster::events(std::size_t firstNeuron, std::size_t lastNeuron) const {
  std::vector<SpikeEvent> out;
  for (long long t = 0; t < steps_; ++t) {
    for (std::size_t i = firstNeuron; i < lastNeuron; ++i) {
      if (at(i, t)) out.push_back({t, i});
    }
  }
  return out;
}

SpikeRaster SpikeRaster::slice(long long first, long long last) const {
  SpikeRaster out(neurons_, last - first);
  for (std::size_t i = 0; i < neurons_; ++i) {
    for (long long t = first; t < last; ++t) {
      if (at(i, t)) out.set(i, t - first);
    }
  }
  return out;
}

ProbeStore::ProbeStore(CoreLayout layout, long long totalSteps, bool recordVoltage,
                       bool recordGenerators, long long firstStep)
    : layout_(std::move(layout)),
      totalSteps_(totalSteps),
      firstStep_(firstStep),
      recordVoltage_(recordVoltage),
      recordGenerators_(recordGenerators),
      cores_(layout_.coreCount()) {}

void ProbeStore::recordStep(std::size_t core, std::span<const std::uint8_t> localSpikes,
                            long long t) {
  CoreBuffers& buffers = cores_.at(core);
  const bool outside = t < firstStep_ || t >= firstStep_ + totalSteps_;
  if (outside || (buffers.started && t <= buffers.lastStep)) {
    throw IncompleteRun("core " + std::to_string(core) + ": step " + std::to_string(t) +
                        " is out of order or outside the recorded range");
  }
  buffers.lastStep = t;
  buffers.started = true;
  ++buffers.stepsRecorded;
  for (std::size_t i = 0; i < localSpikes.size(); ++i) {
    if (localSpikes[i]) buffers.spikes.push_back({i, t});
  }
}

void ProbeStore::onCoreStep(std::size_t core, long long t, std::span<const std::uint8_t> localSpikes,
                            const NeuronState& neurons) {
  recordStep(core, localSpikes, t);
  if (recordVoltage_) {
    auto& v = cores_[core].voltages;
    v.insert(v.end(), neurons.voltage.begin(), neurons.voltage.end());
  }
}

void ProbeStore::onGeneratorSpike(std::size_t core, std::size_t generator, std::size_t neuron,
                                  long long t) {
  if (recordGenerators_) cores_[core].generatorEvents.push_back({generator, neuron, t});
}

ProbeData ProbeStore::postProcess() const {
  ProbeData data;
  data.raster = SpikeRaster(layout_.neuronCount(), totalSteps_);
  for (std::size_t c = 0; c < cores_.size(); ++c) {
    const CoreBuffers& buffers = cores_[c];
    if (buffers.stepsRecorded != totalSteps_) {
      throw IncompleteRun("core " + std::to_string(c) + " recorded " +
                          std::to_string(buffers.stepsRecorded) + " of " +
                          std::to_string(totalSteps_) + " steps");
    }
    const std::size_t offset = layout_.ranges[c].begin;
    for (const auto& s : buffers.spikes) data.raster.set(offset + s.local, s.step - firstStep_);
    data.generatorEvents.insert(data.generatorEvents.end(), buffers.generatorEvents.begin(),
                                buffers.generatorEvents.end());
  }
  std::sort(data.generatorEvents.begin(), data.generatorEvents.end());

  if (recordVoltage_) {
    data.voltages.assign(layout_.neuronCount(),
                         std::vector<double>(static_cast<std::size_t>(totalSteps_), 0.0));
    for (std::size_t c = 0; c < cores_.size(); ++c) {
      const auto& range = layout_.ranges[c];
      const auto& v = cores_[c].voltages;
      for (std::size_t t = 0; t < static_cast<std::size_t>(totalSteps_); ++t) {
        for (std::size_t i = 0; i < range.size(); ++i) {
          data.voltages[range.begin + i][t] = v[t * range.size() + i];
        }
      }
    }
  }

  for (const auto& snapshot : snapshots_) data.weights.push_back(merge(snapshot));
  return data;
}

std::vector<LocalSpike> destack(const SpikeRaster& raster, const CoreLayout& layout,
                                std::size_t core) {
  const auto& range = layout.ranges.at(core);
  std::vector<LocalSpike> out;
  for (long long t = 0; t < raster.steps(); ++t) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
      if (raster.at(i, t)) out.push_back({i - range.begin, t});
    }
  }
  return out;
}

std::vector<NeuronRange> contiguousBlocks(std::size_t n, std::size_t parts) {
  std::vector<NeuronRange> blocks;
  if (parts == 0) return blocks;
  const std::size_t base = n / parts;
  const std::size_t extra = n % parts;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < parts; ++k) {
    const std::size_t size = base + (k < extra ? 1 : 0);
    blocks.push_back({begin, begin + size});
    begin += size;
  }
  return blocks;
}

PoolingReadout::PoolingReadout(std::size_t excitatoryCount, std::size_t outputSize,
                               double outputWeight, NeuronConfig config)
    : pools_(contiguousBlocks(excitatoryCount, outputSize)),
      outputWeight_(outputWeight),
      config_(config),
      state_(outputSize) {
  if (outputSize == 0 || outputSize > excitatoryCount) {
    throw ShapeMismatch("outputSize must lie in [1, excitatory neuron count]");
  }
}

std::vector<std::uint8_t> PoolingReadout::poolAndStep(std::span<const std::uint8_t> exSpikes) {
  if (exSpikes.size() < pools_.back().end) {
    throw ShapeMismatch("spike vector shorter than the pooled population");
  }
  std::vector<std::uint8_t> out(pools_.size(), 0);
  for (std::size_t k = 0; k < pools_.size(); ++k) {
    std::size_t count = 0;
    for (std::size_t i = pools_[k].begin; i < pools_[k].end; ++i) count += exSpikes[i] ? 1 : 0;
    out[k] = stepNeuron(state_, k, outputWeight_ * static_cast<double>(count), config_) ? 1 : 0;
  }
  return out;
}

std::vector<double> smoothSpikes(std::span<const double> row, std::size_t windowSize) {
  if (windowSize == 0) throw Error("smoothing window must be >= 1");
  const std::size_t n = row.size();
  const std::size_t left = (windowSize - 1) / 2;
  const std::size_t right = windowSize / 2;
  std::vector<double> prefix(n + 1, 0.0);
  std::partial_sum(row.begin(), row.end(), prefix.begin() + 1);
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t >= left ? t - left : 0;
    const std::size_t hi = std::min(n, t + right + 1);
    out[t] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

std::vector<double> smoothSpikes(std::span<const std::uint8_t> row, std::size_t windowSize) {
  std::vector<double> values(row.begin(), row.end());
  return smoothSpikes(std::span<const double>(values), windowSize);
}

void writeSpikeCsv(std::ostream& out, const std::vector<SpikeEvent>& events) {
  for (const auto& e : events) out << e.step << ',' << e.neuron << '\n';
}

void writeSpikeCsv(const std::string& path, const std::vector<SpikeEvent>& events) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  writeSpikeCsv(out, events);
  if (!out) throw Error("failed writing " + path);
}

std::vector<SpikeEvent> readSpikeCsv(std::istream& in) {
  std::vector<SpikeEvent> events;
  std::string line;
  std::size_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    SpikeEvent e;
    const char* end = line.data() + line.size();
    bool ok = comma != std::string::npos;
    if (ok) {
      auto [p1, ec1] = std::from_chars(line.data(), line.data() + comma, e.step);
      auto [p2, ec2] = std::from_chars(line.data() + comma + 1, end, e.neuron);
      ok = ec1 == std::errc{} && ec2 == std::errc{} && p1 == line.data() + comma && p2 == end;
    }
    if (!ok) throw Error("malformed spike line " + std::to_string(lineNumber) + ": " + line);
    events.push_back(e);
  }
  return events;
}

std::vector<SpikeEvent> readSpikeCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return readSpikeCsv(in);
}

}  // namespace lavanet
