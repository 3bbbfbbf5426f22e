#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lavanet/engine.hpp"
#include "lavanet/params.hpp"

namespace lavanet {

/// One stimulated region within a trial. The window is relative to the
/// trial start.
struct InputStimulus {
  std::vector<std::size_t> targets;  // sorted excitatory indices
  StepWindow window;
  double spikeProb = 0.0;
  double injectedWeight = 0.0;

  bool operator==(const InputStimulus&) const = default;
};

/// Input schedule for every trial, fixed at build time.
struct InputPlan {
  InputMode mode = InputMode::kNone;
  std::vector<std::vector<std::size_t>> regions;   // sequence sets, leave-n-out base, alternating regions
  std::vector<std::vector<InputStimulus>> trials;  // trials[k] = stimuli of trial k
  std::vector<int> chosenRegion;                   // alternating mode: region used per trial

  bool operator==(const InputPlan&) const = default;
};

/// `inputSequenceSize` disjoint target sets stimulated one after another,
/// each for `inputSteps`. Throws WindowOverflow.
InputPlan buildSequenceInput(const ParameterSet& p, std::mt19937_64& rng);

/// A fixed base set; each trial drops `inputLeaveOutCount` fresh random
/// members. Throws InvalidLeaveOut.
InputPlan buildLeaveNOutInput(const ParameterSet& p, std::mt19937_64& rng);

/// Square of side `inputSquareSide` at (inputSquareX, inputSquareY) on the
/// gridWidth x gridHeight excitatory sheet. Throws SquareOutOfBounds.
InputPlan buildTopologicalInput(const ParameterSet& p);

/// `inputRegionCount` disjoint regions; one is picked uniformly per trial.
/// Throws RegionsDontFit.
InputPlan buildAlternatingInput(const ParameterSet& p, std::mt19937_64& rng);

/// A fixed random target set stimulated over [0, inputSteps) in every trial.
InputPlan buildPlainInput(const ParameterSet& p, std::mt19937_64& rng);

/// Dispatches on inputModeOf(p), drawing from the stimulus stream of p.seed.
InputPlan buildInputPlan(const ParameterSet& p);

/// Engine generators for trial k, with windows shifted to global steps.
std::vector<SpikeGenerator> generatorsForTrial(const InputPlan& plan, int trial, int stepsPerTrial,
                                               std::uint64_t masterSeed);

}  // namespace lavanet
