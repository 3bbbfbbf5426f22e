#pragma once

#include <cstdint>
#include <random>

// Reproducible random streams keyed by (master seed, entity kind, entity
// index). Draws are independent of processing order and thread count.
namespace lavanet::rng {

enum class StreamKind : std::uint64_t {
  kWeights = 1,
  kStimulus = 2,
  kNoisePlacement = 3,
  kGenerator = 4,
};

// splitmix64 finalizer
constexpr std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t value) {
  return mix(key ^ mix(value));
}

constexpr std::uint64_t streamKey(std::uint64_t masterSeed, StreamKind kind, std::uint64_t index) {
  return combine(combine(mix(masterSeed), static_cast<std::uint64_t>(kind)), index);
}

/// Uniform draw in [0, 1) addressed by (stream key, a, b). Pure function.
inline double counterUniform(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t bits = combine(combine(key, a), b);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential engine for single-threaded construction work (weights, plans).
inline std::mt19937_64 makeEngine(std::uint64_t masterSeed, StreamKind kind,
                                  std::uint64_t index = 0) {
  return std::mt19937_64(streamKey(masterSeed, kind, index));
}

}  // namespace lavanet::rng
