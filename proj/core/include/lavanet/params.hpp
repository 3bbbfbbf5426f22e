#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace lavanet {

enum class WeightInit { kConstant, kNormal, kLogNormal, kAnisotropic2d };

std::string toString(WeightInit init);
WeightInit weightInitFromString(const std::string& name);

/// Full configuration of one experiment. Keys in JSON documents are exactly
/// the member names below.
///
/// Defaults reproduce the sequence-learning reservoir: 400 excitatory
/// neurons, 10 trials of 60 steps, a three-region input sequence.
struct ParameterSet {
  // Experiment
  std::uint64_t seed = 1;
  int trials = 10;
  int stepsPerTrial = 60;

  // Neurons
  int refractoryDelay = 2;
  double voltageTau = 100.0;
  double currentTau = 5.0;
  double thresholdMant = 1200.0;

  // Network
  int reservoirExSize = 400;
  int reservoirInSize = 100;  // 80/20 split of the 400 excitatory neurons
  int reservoirConnPerNeuron = 35;
  int neuronsPerCore = 128;

  // Weights. Magnitudes; Dale's law assigns the sign per source pool.
  // normal: |N(mean, weightSigma * mean)|; lognormal: underlying normal has
  // sigma = weightSigma and is shifted so the distribution mean is `mean`.
  WeightInit weightInit = WeightInit::kLogNormal;
  double weightExMean = 20.0;
  double weightInMean = 60.0;
  double weightSigma = 0.5;
  std::string weightInitFile;  // CSR snapshot; overrides weightInit when set

  // Anisotropic 2D excitatory sheet (weightInit = anisotropic2d, topological input)
  int gridWidth = 20;
  int gridHeight = 20;
  double anisoShift = 1.0;
  double anisoSigma = 3.0;
  int anisoCellSize = 5;

  // Plasticity on excitatory-to-excitatory synapses
  bool isLearningRule = true;
  std::string learningRule = "2^-2*x1*y0 - 2^-2*y1*x0 + 2^-4*x1*y1*y0 - 2^-3*y0*w*w";
  double traceTauPre = 20.0;
  double traceTauPost = 20.0;
  double traceTauPost2 = 40.0;
  double traceImpulse = 4.0;
  int learningEpoch = 1;
  double learningWeightMax = 0.0;  // <= 0 selects 2 * weightExMean

  // Input
  bool inputIsSequence = true;
  int inputSequenceSize = 3;
  int inputSteps = 20;
  double inputGenSpikeProb = 0.8;
  int inputNumTargetNeurons = 40;
  double inputWeight = 500.0;
  bool inputIsTopological = false;
  int inputSquareSide = 4;
  int inputSquareX = 0;
  int inputSquareY = 0;
  bool inputIsLeaveNOut = false;
  int inputLeaveOutCount = 5;
  bool inputIsAlternating = false;
  int inputRegionCount = 2;

  // Noise
  int noiseNeurons = 0;
  double noiseSpikeProb = 0.05;
  double noiseWeight = 300.0;

  // Output
  bool outputIsPooling = false;
  int outputSize = 8;
  double outputWeight = 100.0;

  // Probes
  bool isExSpikeProbe = true;
  bool isInSpikeProbe = true;
  bool isOutSpikeProbe = false;
  bool isWeightProbe = true;
  bool isVoltageProbe = false;

  bool resetBetweenTrials = true;
  bool resetTracesBetweenTrials = true;

  // System
  std::string outputDirectory = "runs";
  std::string logLevel = "info";
  int plotWidth = 1200;
  int plotHeight = 600;
  bool isRasterPlot = false;
  int threads = 1;

  bool operator==(const ParameterSet&) const = default;
};

/// [start, end) step range, relative to the start of a trial.
using StepWindow = std::pair<int, int>;

enum class InputMode { kNone, kPlain, kSequence, kTopological, kLeaveNOut, kAlternating };

std::string toString(InputMode mode);

/// Input mode selected by the input flags; the flags are mutually exclusive.
InputMode inputModeOf(const ParameterSet& p);

struct DerivedParameters {
  int reservoirSize = 0;
  long long totalSteps = 0;
  int coreCount = 0;
  int chunkCount = 0;
  InputMode inputMode = InputMode::kNone;
  int stepsPerInput = 0;
  std::vector<StepWindow> inputWindows;  // identical for every trial
  double weightMax = 0.0;

  bool operator==(const DerivedParameters&) const = default;
};

ParameterSet defaults();

/// Names of every parameter key, in declaration order.
const std::vector<std::string>& parameterNames();

/// Names of the system (host/logging/plotting) subset of parameterNames().
const std::vector<std::string>& systemParameterNames();

/// Applies a JSON object of overrides. Unknown keys raise UnknownParameter,
/// values of the wrong JSON type raise ValidationError.
ParameterSet merge(const ParameterSet& base, const nlohmann::json& overrides);

/// Returns every violated invariant; empty means valid.
std::vector<std::string> validate(const ParameterSet& p);

/// Throws ValidationError when `p` is invalid.
DerivedParameters derive(const ParameterSet& p);

void to_json(nlohmann::json& j, const ParameterSet& p);
void from_json(const nlohmann::json& j, ParameterSet& p);
void to_json(nlohmann::json& j, const DerivedParameters& d);

/// Document written to `parameters.json` in a run directory.
nlohmann::json resolvedDocument(const ParameterSet& p, const DerivedParameters& d);

}  // namespace lavanet
