#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "lavanet/sparse.hpp"

namespace lavanet {

/// Magnitude distribution for initial weights. Draws are always positive;
/// the sign comes from the source pool (Dale's law).
struct WeightDistribution {
  enum class Kind { kConstant, kNormal, kLogNormal };

  Kind kind = Kind::kConstant;
  double mean = 1.0;
  /// normal: standard deviation as a fraction of the mean.
  /// lognormal: sigma of the underlying normal; mu is chosen so that the
  /// distribution mean equals `mean`.
  double sigma = 0.0;

  static WeightDistribution constant(double value) { return {Kind::kConstant, value, 0.0}; }
  static WeightDistribution normal(double mean, double relativeSigma) {
    return {Kind::kNormal, mean, relativeSigma};
  }
  static WeightDistribution logNormal(double mean, double sigma) {
    return {Kind::kLogNormal, mean, sigma};
  }

  /// Throws InvalidDistributionParams.
  void check() const;
  double sample(std::mt19937_64& rng) const;
};

/// Reservoir weights split by pool. Blocks are target<-source:
/// ee = ex<-ex, ei = ex<-in, ie = in<-ex, ii = in<-in. Excitatory neurons
/// occupy global indices [0, nEx), inhibitory ones [nEx, nEx + nIn).
struct ReservoirWeights {
  std::size_t nEx = 0;
  std::size_t nIn = 0;
  SparseMatrix ee, ei, ie, ii;
  SparseMatrix full;

  std::size_t size() const { return nEx + nIn; }

  static ReservoirWeights fromFull(SparseMatrix full, std::size_t nEx);
};

/// Empty string when excitatory columns are >= 0, inhibitory columns <= 0 and
/// the diagonal is empty; otherwise the first violation found.
std::string checkDaleAndDiagonal(const SparseMatrix& full, std::size_t nEx);

/// Every source neuron gets exactly `connPerNeuron` distinct targets other
/// than itself, drawn uniformly from the whole reservoir.
ReservoirWeights initRandom(std::size_t nEx, std::size_t nIn, std::size_t connPerNeuron,
                            const WeightDistribution& excitatory,
                            const WeightDistribution& inhibitory, std::mt19937_64& rng);

ReservoirWeights initConstant(std::size_t nEx, std::size_t nIn, std::size_t connPerNeuron,
                              double valueEx, double valueIn, std::mt19937_64& rng);

struct AnisotropicConfig {
  std::size_t gridWidth = 0;
  std::size_t gridHeight = 0;
  double shiftMagnitude = 1.0;
  double profileSigma = 3.0;
  std::size_t cellSize = 5;  // direction-lattice spacing in grid units
};

/// Smooth preferred-direction field on the excitatory torus: random angles
/// on a coarse periodic lattice, unit vectors bilinearly interpolated.
/// Returns one angle (radians) per grid position, row-major.
std::vector<double> directionField(const AnisotropicConfig& config, std::mt19937_64& rng);

/// `count` distinct grid targets (row-major indices, never the source itself)
/// drawn from an isotropic Gaussian of std `profileSigma` around the source
/// position shifted by `shiftMagnitude` along `theta`, on the torus.
std::vector<std::size_t> sampleAnisotropicTargets(std::size_t x, std::size_t y, double theta,
                                                  std::size_t count,
                                                  const AnisotropicConfig& config,
                                                  std::mt19937_64& rng);

/// Excitatory neurons live on a gridWidth x gridHeight torus. Each one sends
/// round(connPerNeuron * nEx / N) connections through sampleAnisotropicTargets
/// and the remainder to uniformly chosen inhibitory neurons; inhibitory
/// sources are wired as in initRandom.
ReservoirWeights initAnisotropic(const AnisotropicConfig& config, std::size_t nEx,
                                 std::size_t nIn, std::size_t connPerNeuron,
                                 const WeightDistribution& excitatory,
                                 const WeightDistribution& inhibitory, std::mt19937_64& rng);

}  // namespace lavanet
