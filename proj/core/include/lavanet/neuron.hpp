#pragma once

#include <cstddef>
#include <vector>

namespace lavanet {

/// Current-based leaky integrate-and-fire parameters, in timesteps and
/// membrane-potential units. Decay is linear per step: x <- x (1 - 1/tau).
struct NeuronConfig {
  double voltageTau = 100.0;
  double currentTau = 5.0;
  double threshold = 1200.0;
  int refractoryDelay = 2;

  double voltageDecay() const { return 1.0 - 1.0 / voltageTau; }
  double currentDecay() const { return 1.0 - 1.0 / currentTau; }
};

struct NeuronState {
  std::vector<double> voltage;
  std::vector<double> current;
  std::vector<int> refractory;  // steps left; voltage is held at 0 meanwhile

  NeuronState() = default;
  explicit NeuronState(std::size_t n) : voltage(n, 0.0), current(n, 0.0), refractory(n, 0) {}

  std::size_t size() const { return voltage.size(); }
  void reset();
};

/// Advances neuron i by one step with total input `input` (synaptic plus
/// external). Returns true on a spike.
///   u <- u (1 - 1/currentTau) + input
///   v <- v (1 - 1/voltageTau) + u        (skipped while refractory)
///   v >= threshold: spike, v <- 0, refractory <- refractoryDelay
inline bool stepNeuron(NeuronState& s, std::size_t i, double input, const NeuronConfig& config) {
  s.current[i] = s.current[i] * config.currentDecay() + input;
  if (s.refractory[i] > 0) {
    --s.refractory[i];
    return false;
  }
  s.voltage[i] = s.voltage[i] * config.voltageDecay() + s.current[i];
  if (s.voltage[i] >= config.threshold) {
    s.voltage[i] = 0.0;
    s.refractory[i] = config.refractoryDelay;
    return true;
  }
  return false;
}

}  // namespace lavanet
