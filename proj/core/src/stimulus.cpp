#include "lavanet/stimulus.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lavanet/errors.hpp"
#include "lavanet/rng.hpp"

namespace lavanet {

namespace {

std::vector<std::size_t> shuffledExcitatory(const ParameterSet& p, std::mt19937_64& rng) {
  std::vector<std::size_t> pool(static_cast<std::size_t>(std::max(0, p.reservoirExSize)));
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::shuffle(pool.begin(), pool.end(), rng);
  return pool;
}

// Splits the first count * size entries of a shuffled pool into sorted,
// disjoint groups.
std::vector<std::vector<std::size_t>> disjointGroups(const std::vector<std::size_t>& pool,
                                                     std::size_t count, std::size_t size) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t g = 0; g < count; ++g) {
    std::vector<std::size_t> group(pool.begin() + static_cast<long>(g * size),
                                   pool.begin() + static_cast<long>((g + 1) * size));
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }
  return groups;
}

void checkWindow(const ParameterSet& p, long long end) {
  if (p.inputSteps < 1 || end > p.stepsPerTrial) {
    throw WindowOverflow("input windows end at step " + std::to_string(end) +
                         " but a trial has " + std::to_string(p.stepsPerTrial) + " steps");
  }
}

void checkTargetCount(const ParameterSet& p) {
  if (p.inputNumTargetNeurons < 0 || p.inputNumTargetNeurons > p.reservoirExSize) {
    throw RegionsDontFit("inputNumTargetNeurons must lie in [0, reservoirExSize]");
  }
}

InputStimulus stimulus(std::vector<std::size_t> targets, int start, int end, const ParameterSet& p) {
  return {std::move(targets), {start, end}, p.inputGenSpikeProb, p.inputWeight};
}

}  // namespace

InputPlan buildSequenceInput(const ParameterSet& p, std::mt19937_64& rng) {
  checkWindow(p, static_cast<long long>(p.inputSequenceSize) * p.inputSteps);
  checkTargetCount(p);
  const auto count = static_cast<std::size_t>(p.inputSequenceSize);
  const auto size = static_cast<std::size_t>(p.inputNumTargetNeurons);
  if (count * size > static_cast<std::size_t>(p.reservoirExSize)) {
    throw RegionsDontFit("sequence sets need " + std::to_string(count * size) +
                         " distinct excitatory neurons, only " +
                         std::to_string(p.reservoirExSize) + " exist");
  }
  InputPlan plan;
  plan.mode = InputMode::kSequence;
  plan.regions = disjointGroups(shuffledExcitatory(p, rng), count, size);
  std::vector<InputStimulus> trial;
  for (std::size_t k = 0; k < count; ++k) {
    const int start = static_cast<int>(k) * p.inputSteps;
    trial.push_back(stimulus(plan.regions[k], start, start + p.inputSteps, p));
  }
  plan.trials.assign(static_cast<std::size_t>(p.trials), trial);
  return plan;
}

InputPlan buildLeaveNOutInput(const ParameterSet& p, std::mt19937_64& rng) {
  checkWindow(p, p.inputSteps);
  checkTargetCount(p);
  if (p.inputLeaveOutCount < 0 || p.inputLeaveOutCount >= p.inputNumTargetNeurons) {
    throw InvalidLeaveOut("inputLeaveOutCount (" + std::to_string(p.inputLeaveOutCount) +
                          ") must lie in [0, inputNumTargetNeurons=" +
                          std::to_string(p.inputNumTargetNeurons) + ")");
  }
  InputPlan plan;
  plan.mode = InputMode::kLeaveNOut;
  plan.regions = disjointGroups(shuffledExcitatory(p, rng), 1,
                                static_cast<std::size_t>(p.inputNumTargetNeurons));
  const auto& base = plan.regions.front();
  for (int k = 0; k < p.trials; ++k) {
    std::vector<std::size_t> dropped;
    std::sample(base.begin(), base.end(), std::back_inserter(dropped),
                static_cast<std::size_t>(p.inputLeaveOutCount), rng);
    std::vector<std::size_t> kept;
    std::set_difference(base.begin(), base.end(), dropped.begin(), dropped.end(),
                        std::back_inserter(kept));
    plan.trials.push_back({stimulus(std::move(kept), 0, p.inputSteps, p)});
  }
  return plan;
}

InputPlan buildTopologicalInput(const ParameterSet& p) {
  checkWindow(p, p.inputSteps);
  if (static_cast<long long>(p.gridWidth) * p.gridHeight != p.reservoirExSize) {
    throw GridMismatch("topological input needs gridWidth x gridHeight == reservoirExSize");
  }
  if (p.inputSquareSide < 1 || p.inputSquareX < 0 || p.inputSquareY < 0 ||
      p.inputSquareX + p.inputSquareSide > p.gridWidth ||
      p.inputSquareY + p.inputSquareSide > p.gridHeight) {
    throw SquareOutOfBounds("square of side " + std::to_string(p.inputSquareSide) + " at (" +
                            std::to_string(p.inputSquareX) + ", " +
                            std::to_string(p.inputSquareY) + ") does not fit a " +
                            std::to_string(p.gridWidth) + "x" + std::to_string(p.gridHeight) +
                            " grid");
  }
  std::vector<std::size_t> targets;
  for (int y = p.inputSquareY; y < p.inputSquareY + p.inputSquareSide; ++y) {
    for (int x = p.inputSquareX; x < p.inputSquareX + p.inputSquareSide; ++x) {
      targets.push_back(static_cast<std::size_t>(y * p.gridWidth + x));
    }
  }
  InputPlan plan;
  plan.mode = InputMode::kTopological;
  plan.regions = {targets};
  plan.trials.assign(static_cast<std::size_t>(p.trials), {stimulus(targets, 0, p.inputSteps, p)});
  return plan;
}

InputPlan buildAlternatingInput(const ParameterSet& p, std::mt19937_64& rng) {
  checkWindow(p, p.inputSteps);
  if (p.inputRegionCount < 2) throw RegionsDontFit("alternating input needs at least 2 regions");
  const auto count = static_cast<std::size_t>(p.inputRegionCount);
  const auto size = static_cast<std::size_t>(std::max(0, p.inputNumTargetNeurons));
  if (count * size > static_cast<std::size_t>(p.reservoirExSize)) {
    throw RegionsDontFit(std::to_string(count) + " regions of " + std::to_string(size) +
                         " neurons exceed " + std::to_string(p.reservoirExSize) +
                         " excitatory neurons");
  }
  InputPlan plan;
  plan.mode = InputMode::kAlternating;
  plan.regions = disjointGroups(shuffledExcitatory(p, rng), count, size);
  std::uniform_int_distribution<int> pick(0, p.inputRegionCount - 1);
  for (int k = 0; k < p.trials; ++k) {
    const int region = pick(rng);
    plan.chosenRegion.push_back(region);
    plan.trials.push_back(
        {stimulus(plan.regions[static_cast<std::size_t>(region)], 0, p.inputSteps, p)});
  }
  return plan;
}

InputPlan buildPlainInput(const ParameterSet& p, std::mt19937_64& rng) {
  checkWindow(p, p.inputSteps);
  checkTargetCount(p);
  InputPlan plan;
  plan.mode = InputMode::kPlain;
  plan.regions = disjointGroups(shuffledExcitatory(p, rng), 1,
                                static_cast<std::size_t>(p.inputNumTargetNeurons));
  plan.trials.assign(static_cast<std::size_t>(p.trials),
                     {stimulus(plan.regions.front(), 0, p.inputSteps, p)});
  return plan;
}

InputPlan buildInputPlan(const ParameterSet& p) {
  auto rng = rng::makeEngine(p.seed, rng::StreamKind::kStimulus);
  switch (inputModeOf(p)) {
    case InputMode::kSequence: return buildSequenceInput(p, rng);
    case InputMode::kTopological: return buildTopologicalInput(p);
    case InputMode::kLeaveNOut: return buildLeaveNOutInput(p, rng);
    case InputMode::kAlternating: return buildAlternatingInput(p, rng);
    case InputMode::kPlain: return buildPlainInput(p, rng);
    case InputMode::kNone: break;
  }
  InputPlan none;
  none.trials.resize(static_cast<std::size_t>(std::max(0, p.trials)));
  return none;
}

std::vector<SpikeGenerator> generatorsForTrial(const InputPlan& plan, int trial, int stepsPerTrial,
                                               std::uint64_t masterSeed) {
  std::vector<SpikeGenerator> generators;
  if (trial < 0 || static_cast<std::size_t>(trial) >= plan.trials.size()) return generators;
  const long long origin = static_cast<long long>(trial) * stepsPerTrial;
  const auto& stimuli = plan.trials[static_cast<std::size_t>(trial)];
  for (std::size_t e = 0; e < stimuli.size(); ++e) {
    const auto& s = stimuli[e];
    SpikeGenerator g;
    g.targetNeurons = s.targets;
    g.activeWindows.push_back({origin + s.window.first, origin + s.window.second});
    g.spikeProb = s.spikeProb;
    g.injectedWeight = s.injectedWeight;
    g.streamKey = rng::streamKey(masterSeed, rng::StreamKind::kGenerator,
                                 (static_cast<std::uint64_t>(trial) << 20) | e);
    generators.push_back(std::move(g));
  }
  return generators;
}

}  // namespace lavanet
