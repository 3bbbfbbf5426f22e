#include "lavanet/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "lavanet/errors.hpp"

namespace lavanet {

namespace {

// Floyd's algorithm: k distinct values from [0, n), excluding `skip`.
std::vector<std::size_t> sampleDistinct(std::size_t n, std::size_t k, std::size_t skip,
                                        std::mt19937_64& rng) {
  const std::size_t pool = skip < n ? n - 1 : n;
  std::set<std::size_t> chosen;
  for (std::size_t i = pool - k; i < pool; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    const std::size_t t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(i);
  }
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t v : chosen) out.push_back(skip < n && v >= skip ? v + 1 : v);
  return out;
}

double signedMagnitude(bool excitatory, double magnitude) {
  return excitatory ? magnitude : -magnitude;
}

void checkSizes(std::size_t nEx, std::size_t nIn, std::size_t connPerNeuron) {
  if (connPerNeuron > 0 && connPerNeuron >= nEx + nIn) {
    throw ShapeMismatch("connPerNeuron (" + std::to_string(connPerNeuron) +
                        ") must be smaller than the reservoir size (" +
                        std::to_string(nEx + nIn) + ")");
  }
}

// Uniform wiring of source neurons [first, last) into the whole reservoir.
void wireUniform(std::size_t nEx, std::size_t n, std::size_t first, std::size_t last,
                 std::size_t connPerNeuron, const WeightDistribution& excitatory,
                 const WeightDistribution& inhibitory, std::mt19937_64& rng,
                 std::vector<Triplet>& triplets) {
  if (connPerNeuron == 0) return;
  for (std::size_t source = first; source < last; ++source) {
    const bool ex = source < nEx;
    const auto& dist = ex ? excitatory : inhibitory;
    for (std::size_t target : sampleDistinct(n, connPerNeuron, source, rng)) {
      triplets.push_back({static_cast<Index>(target), static_cast<Index>(source),
                          signedMagnitude(ex, dist.sample(rng))});
    }
  }
}

ReservoirWeights assemble(std::size_t nEx, std::size_t nIn, std::vector<Triplet> triplets) {
  const std::size_t n = nEx + nIn;
  return ReservoirWeights::fromFull(SparseMatrix::fromTriplets(n, n, std::move(triplets)), nEx);
}

}  // namespace

void WeightDistribution::check() const {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw InvalidDistributionParams("weight mean must be positive and finite");
  }
  if (kind != Kind::kConstant && !(sigma > 0.0)) {
    throw InvalidDistributionParams("weight sigma must be > 0 for normal/lognormal draws");
  }
}

double WeightDistribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::kConstant:
      return mean;
    case Kind::kNormal: {
      std::normal_distribution<double> draw(mean, sigma * mean);
      double v = 0.0;
      while (v == 0.0) v = std::abs(draw(rng));
      return v;
    }
    case Kind::kLogNormal: {
      std::lognormal_distribution<double> draw(std::log(mean) - 0.5 * sigma * sigma, sigma);
      return draw(rng);
    }
  }
  return mean;
}

ReservoirWeights ReservoirWeights::fromFull(SparseMatrix full, std::size_t nEx) {
  if (!full.square()) throw NonSquare("reservoir weight matrix must be square");
  if (nEx > full.rows()) throw ShapeMismatch("nEx exceeds reservoir size");
  ReservoirWeights w;
  w.nEx = nEx;
  w.nIn = full.rows() - nEx;
  const std::size_t n = full.rows();
  w.ee = full.block(0, nEx, 0, nEx);
  w.ei = full.block(0, nEx, nEx, n);
  w.ie = full.block(nEx, n, 0, nEx);
  w.ii = full.block(nEx, n, nEx, n);
  w.full = std::move(full);
  return w;
}

std::string checkDaleAndDiagonal(const SparseMatrix& full, std::size_t nEx) {
  for (std::size_t i = 0; i < full.rows(); ++i) {
    const auto r = full.row(i);
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      const std::size_t j = r.columns[k];
      const double v = r.values[k];
      if (i == j) return "self-connection at neuron " + std::to_string(i);
      if (j < nEx && v < 0.0) return "negative weight from excitatory neuron " + std::to_string(j);
      if (j >= nEx && v > 0.0) return "positive weight from inhibitory neuron " + std::to_string(j);
    }
  }
  return {};
}

ReservoirWeights initRandom(std::size_t nEx, std::size_t nIn, std::size_t connPerNeuron,
                            const WeightDistribution& excitatory,
                            const WeightDistribution& inhibitory, std::mt19937_64& rng) {
  excitatory.check();
  inhibitory.check();
  checkSizes(nEx, nIn, connPerNeuron);
  std::vector<Triplet> triplets;
  triplets.reserve((nEx + nIn) * connPerNeuron);
  wireUniform(nEx, nEx + nIn, 0, nEx + nIn, connPerNeuron, excitatory, inhibitory, rng, triplets);
  return assemble(nEx, nIn, std::move(triplets));
}

ReservoirWeights initConstant(std::size_t nEx, std::size_t nIn, std::size_t connPerNeuron,
                              double valueEx, double valueIn, std::mt19937_64& rng) {
  return initRandom(nEx, nIn, connPerNeuron, WeightDistribution::constant(valueEx),
                    WeightDistribution::constant(valueIn), rng);
}

std::vector<double> directionField(const AnisotropicConfig& config, std::mt19937_64& rng) {
  const std::size_t w = config.gridWidth;
  const std::size_t h = config.gridHeight;
  const std::size_t cell = std::max<std::size_t>(1, config.cellSize);
  const std::size_t latticeW = (w + cell - 1) / cell;
  const std::size_t latticeH = (h + cell - 1) / cell;

  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> lx(latticeW * latticeH), ly(latticeW * latticeH);
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double a = angle(rng);
    lx[k] = std::cos(a);
    ly[k] = std::sin(a);
  }

  std::vector<double> theta(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double gx = static_cast<double>(x) / static_cast<double>(cell);
      const double gy = static_cast<double>(y) / static_cast<double>(cell);
      const std::size_t x0 = static_cast<std::size_t>(gx) % latticeW;
      const std::size_t y0 = static_cast<std::size_t>(gy) % latticeH;
      const std::size_t x1 = (x0 + 1) % latticeW;
      const std::size_t y1 = (y0 + 1) % latticeH;
      const double fx = gx - std::floor(gx);
      const double fy = gy - std::floor(gy);
      auto lerp2 = [&](const std::vector<double>& v) {
        const double top = v[y0 * latticeW + x0] * (1 - fx) + v[y0 * latticeW + x1] * fx;
        const double bottom = v[y1 * latticeW + x0] * (1 - fx) + v[y1 * latticeW + x1] * fx;
        return top * (1 - fy) + bottom * fy;
      };
      theta[y * w + x] = std::atan2(lerp2(ly), lerp2(lx));
    }
  }
  return theta;
}

std::vector<std::size_t> sampleAnisotropicTargets(std::size_t x, std::size_t y, double theta,
                                                  std::size_t count,
                                                  const AnisotropicConfig& config,
                                                  std::mt19937_64& rng) {
  const auto w = static_cast<long long>(config.gridWidth);
  const auto h = static_cast<long long>(config.gridHeight);
  const std::size_t self = y * config.gridWidth + x;
  if (count >= config.gridWidth * config.gridHeight) {
    throw ShapeMismatch("more anisotropic targets requested than grid positions");
  }
  const double cx = static_cast<double>(x) + config.shiftMagnitude * std::cos(theta);
  const double cy = static_cast<double>(y) + config.shiftMagnitude * std::sin(theta);
  std::normal_distribution<double> dx(cx, config.profileSigma);
  std::normal_distribution<double> dy(cy, config.profileSigma);

  std::set<std::size_t> chosen;
  std::vector<std::size_t> ordered;
  ordered.reserve(count);
  const std::size_t maxAttempts = 1000 + 200 * count;
  for (std::size_t attempt = 0; ordered.size() < count; ++attempt) {
    if (attempt == maxAttempts) {
      throw InvalidDistributionParams(
          "anisotropic profile too narrow to place " + std::to_string(count) +
          " distinct targets; increase anisoSigma");
    }
    long long tx = static_cast<long long>(std::llround(dx(rng))) % w;
    long long ty = static_cast<long long>(std::llround(dy(rng))) % h;
    if (tx < 0) tx += w;
    if (ty < 0) ty += h;
    const auto target = static_cast<std::size_t>(ty * w + tx);
    if (target == self || !chosen.insert(target).second) continue;
    ordered.push_back(target);
  }
  return ordered;
}

ReservoirWeights initAnisotropic(const AnisotropicConfig& config, std::size_t nEx,
                                 std::size_t nIn, std::size_t connPerNeuron,
                                 const WeightDistribution& excitatory,
                                 const WeightDistribution& inhibitory, std::mt19937_64& rng) {
  if (config.gridWidth * config.gridHeight != nEx) {
    throw GridMismatch("grid " + std::to_string(config.gridWidth) + "x" +
                       std::to_string(config.gridHeight) + " does not hold " +
                       std::to_string(nEx) + " excitatory neurons");
  }
  if (!(config.profileSigma > 0.0)) throw InvalidDistributionParams("profileSigma must be > 0");
  excitatory.check();
  inhibitory.check();
  checkSizes(nEx, nIn, connPerNeuron);

  const std::size_t n = nEx + nIn;
  const auto toInhibitory = static_cast<std::size_t>(std::llround(
      static_cast<double>(connPerNeuron) * static_cast<double>(nIn) / static_cast<double>(n)));
  const std::size_t onGrid = connPerNeuron - std::min(toInhibitory, connPerNeuron);
  if (onGrid >= nEx && onGrid > 0) {
    throw ShapeMismatch("too many excitatory targets for the grid");
  }

  const auto theta = directionField(config, rng);
  std::vector<Triplet> triplets;
  triplets.reserve(n * connPerNeuron);
  for (std::size_t source = 0; source < nEx; ++source) {
    const std::size_t x = source % config.gridWidth;
    const std::size_t y = source / config.gridWidth;
    if (onGrid > 0) {
      for (std::size_t target : sampleAnisotropicTargets(x, y, theta[source], onGrid, config, rng)) {
        triplets.push_back({static_cast<Index>(target), static_cast<Index>(source),
                            excitatory.sample(rng)});
      }
    }
    const std::size_t rest = connPerNeuron - onGrid;
    if (rest > 0) {
      for (std::size_t k : sampleDistinct(nIn, rest, nIn, rng)) {
        triplets.push_back({static_cast<Index>(nEx + k), static_cast<Index>(source),
                            excitatory.sample(rng)});
      }
    }
  }
  wireUniform(nEx, n, nEx, n, connPerNeuron, excitatory, inhibitory, rng, triplets);
  return assemble(nEx, nIn, std::move(triplets));
}

}  // namespace lavanet
