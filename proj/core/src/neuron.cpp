#include "lavanet/neuron.hpp"

#include <algorithm>

namespace lavanet {

void NeuronState::reset() {
  std::fill(voltage.begin(), voltage.end(), 0.0);
  std::fill(current.begin(), current.end(), 0.0);
  std::fill(refractory.begin(), refractory.end(), 0);
}

}  // namespace lavanet
