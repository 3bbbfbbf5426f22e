#include "lavanet/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lavanet/errors.hpp"

namespace lavanet {

namespace {

// Single source of truth for the key <-> member mapping.
template <typename Params, typename Visitor>
void visitFields(Params& p, Visitor&& v) {
  v("seed", p.seed);
  v("trials", p.trials);
  v("stepsPerTrial", p.stepsPerTrial);
  v("refractoryDelay", p.refractoryDelay);
  v("voltageTau", p.voltageTau);
  v("currentTau", p.currentTau);
  v("thresholdMant", p.thresholdMant);
  v("reservoirExSize", p.reservoirExSize);
  v("reservoirInSize", p.reservoirInSize);
  v("reservoirConnPerNeuron", p.reservoirConnPerNeuron);
  v("neuronsPerCore", p.neuronsPerCore);
  v("weightInit", p.weightInit);
  v("weightExMean", p.weightExMean);
  v("weightInMean", p.weightInMean);
  v("weightSigma", p.weightSigma);
  v("weightInitFile", p.weightInitFile);
  v("gridWidth", p.gridWidth);
  v("gridHeight", p.gridHeight);
  v("anisoShift", p.anisoShift);
  v("anisoSigma", p.anisoSigma);
  v("anisoCellSize", p.anisoCellSize);
  v("isLearningRule", p.isLearningRule);
  v("learningRule", p.learningRule);
  v("traceTauPre", p.traceTauPre);
  v("traceTauPost", p.traceTauPost);
  v("traceTauPost2", p.traceTauPost2);
  v("traceImpulse", p.traceImpulse);
  v("learningEpoch", p.learningEpoch);
  v("learningWeightMax", p.learningWeightMax);
  v("inputIsSequence", p.inputIsSequence);
  v("inputSequenceSize", p.inputSequenceSize);
  v("inputSteps", p.inputSteps);
  v("inputGenSpikeProb", p.inputGenSpikeProb);
  v("inputNumTargetNeurons", p.inputNumTargetNeurons);
  v("inputWeight", p.inputWeight);
  v("inputIsTopological", p.inputIsTopological);
  v("inputSquareSide", p.inputSquareSide);
  v("inputSquareX", p.inputSquareX);
  v("inputSquareY", p.inputSquareY);
  v("inputIsLeaveNOut", p.inputIsLeaveNOut);
  v("inputLeaveOutCount", p.inputLeaveOutCount);
  v("inputIsAlternating", p.inputIsAlternating);
  v("inputRegionCount", p.inputRegionCount);
  v("noiseNeurons", p.noiseNeurons);
  v("noiseSpikeProb", p.noiseSpikeProb);
  v("noiseWeight", p.noiseWeight);
  v("outputIsPooling", p.outputIsPooling);
  v("outputSize", p.outputSize);
  v("outputWeight", p.outputWeight);
  v("isExSpikeProbe", p.isExSpikeProbe);
  v("isInSpikeProbe", p.isInSpikeProbe);
  v("isOutSpikeProbe", p.isOutSpikeProbe);
  v("isWeightProbe", p.isWeightProbe);
  v("isVoltageProbe", p.isVoltageProbe);
  v("resetBetweenTrials", p.resetBetweenTrials);
  v("resetTracesBetweenTrials", p.resetTracesBetweenTrials);
  v("outputDirectory", p.outputDirectory);
  v("logLevel", p.logLevel);
  v("plotWidth", p.plotWidth);
  v("plotHeight", p.plotHeight);
  v("isRasterPlot", p.isRasterPlot);
  v("threads", p.threads);
}

bool isIntegral(const nlohmann::json& j) {
  return j.is_number_integer() || j.is_number_unsigned();
}

// Checks that an override has the same JSON kind as the default it replaces.
void checkType(const std::string& key, const nlohmann::json& base, const nlohmann::json& value,
               std::vector<std::string>& errors) {
  bool ok = false;
  std::string expected;
  if (base.is_boolean()) {
    ok = value.is_boolean();
    expected = "boolean";
  } else if (base.is_string()) {
    ok = value.is_string();
    expected = "string";
  } else if (base.is_number_unsigned()) {
    ok = value.is_number_unsigned() || (value.is_number_integer() && value.get<long long>() >= 0);
    expected = "non-negative integer";
  } else if (base.is_number_integer()) {
    ok = isIntegral(value);
    expected = "integer";
  } else if (base.is_number_float()) {
    ok = value.is_number();
    expected = "number";
  }
  if (!ok) errors.push_back(key + ": expected " + expected + ", got " + value.dump());
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string toString(WeightInit init) {
  switch (init) {
    case WeightInit::kConstant: return "constant";
    case WeightInit::kNormal: return "normal";
    case WeightInit::kLogNormal: return "lognormal";
    case WeightInit::kAnisotropic2d: return "anisotropic2d";
  }
  return "unknown";
}

WeightInit weightInitFromString(const std::string& name) {
  if (name == "constant") return WeightInit::kConstant;
  if (name == "normal") return WeightInit::kNormal;
  if (name == "lognormal") return WeightInit::kLogNormal;
  if (name == "anisotropic2d") return WeightInit::kAnisotropic2d;
  throw ValidationError({"weightInit: unknown initializer '" + name +
                         "' (expected constant, normal, lognormal or anisotropic2d)"});
}

void to_json(nlohmann::json& j, WeightInit init) { j = toString(init); }
void from_json(const nlohmann::json& j, WeightInit& init) {
  init = weightInitFromString(j.get<std::string>());
}

std::string toString(InputMode mode) {
  switch (mode) {
    case InputMode::kNone: return "none";
    case InputMode::kPlain: return "plain";
    case InputMode::kSequence: return "sequence";
    case InputMode::kTopological: return "topological";
    case InputMode::kLeaveNOut: return "leaveNOut";
    case InputMode::kAlternating: return "alternating";
  }
  return "unknown";
}

ParameterSet defaults() { return ParameterSet{}; }

const std::vector<std::string>& parameterNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    ParameterSet p;
    visitFields(p, [&](const char* key, auto&) { out.emplace_back(key); });
    return out;
  }();
  return names;
}

const std::vector<std::string>& systemParameterNames() {
  static const std::vector<std::string> names = {
      "outputDirectory", "logLevel", "plotWidth", "plotHeight", "isRasterPlot", "threads"};
  return names;
}

void to_json(nlohmann::json& j, const ParameterSet& p) {
  j = nlohmann::json::object();
  visitFields(p, [&](const char* key, const auto& field) { j[key] = field; });
}

void from_json(const nlohmann::json& j, ParameterSet& p) {
  visitFields(p, [&](const char* key, auto& field) { j.at(key).get_to(field); });
}

ParameterSet merge(const ParameterSet& base, const nlohmann::json& overrides) {
  if (overrides.is_null()) return base;
  if (!overrides.is_object()) {
    throw ValidationError({"parameter overrides must be a JSON object"});
  }
  nlohmann::json merged = base;
  std::vector<std::string> typeErrors;
  for (const auto& [key, value] : overrides.items()) {
    if (!merged.contains(key)) throw UnknownParameter(key);
    checkType(key, merged[key], value, typeErrors);
    merged[key] = value;
  }
  if (!typeErrors.empty()) throw ValidationError(std::move(typeErrors));
  return merged.get<ParameterSet>();
}

InputMode inputModeOf(const ParameterSet& p) {
  if (p.inputIsSequence) return InputMode::kSequence;
  if (p.inputIsTopological) return InputMode::kTopological;
  if (p.inputIsLeaveNOut) return InputMode::kLeaveNOut;
  if (p.inputIsAlternating) return InputMode::kAlternating;
  return p.inputNumTargetNeurons > 0 ? InputMode::kPlain : InputMode::kNone;
}

std::vector<std::string> validate(const ParameterSet& p) {
  std::vector<std::string> v;
  auto probability = [&](const char* name, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      v.push_back(std::string(name) + ": probability out of range [0,1] (got " + fmt(value) + ")");
    }
  };
  auto atLeast = [&](const char* name, double value, double lo) {
    if (!(value >= lo)) {
      v.push_back(std::string(name) + ": must be >= " + fmt(lo) + " (got " + fmt(value) + ")");
    }
  };
  auto positive = [&](const char* name, double value) {
    if (!(value > 0.0)) v.push_back(std::string(name) + ": must be > 0 (got " + fmt(value) + ")");
  };

  atLeast("trials", p.trials, 1);
  atLeast("stepsPerTrial", p.stepsPerTrial, 1);
  atLeast("refractoryDelay", p.refractoryDelay, 0);
  // Linear decay factor 1 - 1/tau must lie in [0, 1).
  atLeast("voltageTau", p.voltageTau, 1.0);
  atLeast("currentTau", p.currentTau, 1.0);
  positive("thresholdMant", p.thresholdMant);

  atLeast("reservoirExSize", p.reservoirExSize, 1);
  atLeast("reservoirInSize", p.reservoirInSize, 1);
  atLeast("reservoirConnPerNeuron", p.reservoirConnPerNeuron, 0);
  const long long reservoirSize =
      static_cast<long long>(p.reservoirExSize) + static_cast<long long>(p.reservoirInSize);
  if (p.reservoirConnPerNeuron >= reservoirSize) {
    v.push_back("reservoirConnPerNeuron: must be < reservoirExSize + reservoirInSize (" +
                std::to_string(p.reservoirConnPerNeuron) + " >= " + std::to_string(reservoirSize) +
                ")");
  }
  if (p.neuronsPerCore < 1 || p.neuronsPerCore > 1024) {
    v.push_back("neuronsPerCore: must lie in [1, 1024] compartments per core (got " +
                std::to_string(p.neuronsPerCore) + ")");
  }

  if (p.weightInitFile.empty()) {
    positive("weightExMean", p.weightExMean);
    positive("weightInMean", p.weightInMean);
    if (p.weightInit == WeightInit::kNormal || p.weightInit == WeightInit::kLogNormal) {
      positive("weightSigma", p.weightSigma);
    }
    if (p.weightInit == WeightInit::kAnisotropic2d) {
      if (static_cast<long long>(p.gridWidth) * p.gridHeight != p.reservoirExSize) {
        v.push_back("gridWidth x gridHeight must equal reservoirExSize (" +
                    std::to_string(p.gridWidth) + "x" + std::to_string(p.gridHeight) +
                    " != " + std::to_string(p.reservoirExSize) + ")");
      }
      atLeast("anisoShift", p.anisoShift, 0.0);
      positive("anisoSigma", p.anisoSigma);
      atLeast("anisoCellSize", p.anisoCellSize, 1);
    }
  }

  if (p.isLearningRule) {
    if (p.learningRule.empty()) v.push_back("learningRule: empty rule with isLearningRule set");
    atLeast("traceTauPre", p.traceTauPre, 1.0);
    atLeast("traceTauPost", p.traceTauPost, 1.0);
    atLeast("traceTauPost2", p.traceTauPost2, 1.0);
    positive("traceImpulse", p.traceImpulse);
    atLeast("learningEpoch", p.learningEpoch, 1);
  }

  probability("inputGenSpikeProb", p.inputGenSpikeProb);
  probability("noiseSpikeProb", p.noiseSpikeProb);

  const int modeFlags = int(p.inputIsSequence) + int(p.inputIsTopological) +
                        int(p.inputIsLeaveNOut) + int(p.inputIsAlternating);
  if (modeFlags > 1) {
    v.push_back(
        "input modes are exclusive: set at most one of inputIsSequence, inputIsTopological, "
        "inputIsLeaveNOut, inputIsAlternating");
  }
  atLeast("inputNumTargetNeurons", p.inputNumTargetNeurons, 0);
  if (p.inputNumTargetNeurons > p.reservoirExSize) {
    v.push_back("inputNumTargetNeurons: exceeds reservoirExSize (" +
                std::to_string(p.inputNumTargetNeurons) + " > " +
                std::to_string(p.reservoirExSize) + ")");
  }
  const InputMode mode = inputModeOf(p);
  if (mode != InputMode::kNone) {
    atLeast("inputSteps", p.inputSteps, 1);
    if (mode != InputMode::kSequence && p.inputSteps > p.stepsPerTrial) {
      v.push_back("inputSteps: exceeds stepsPerTrial");
    }
  }
  if (mode == InputMode::kSequence) {
    atLeast("inputSequenceSize", p.inputSequenceSize, 1);
    if (static_cast<long long>(p.inputSequenceSize) * p.inputSteps > p.stepsPerTrial) {
      v.push_back("inputSequenceSize x inputSteps exceeds stepsPerTrial (" +
                  std::to_string(p.inputSequenceSize) + " x " + std::to_string(p.inputSteps) +
                  " > " + std::to_string(p.stepsPerTrial) + ")");
    }
    if (static_cast<long long>(p.inputSequenceSize) * p.inputNumTargetNeurons >
        p.reservoirExSize) {
      v.push_back("sequence target sets do not fit disjointly into the excitatory pool");
    }
  }
  if (mode == InputMode::kTopological) {
    if (static_cast<long long>(p.gridWidth) * p.gridHeight != p.reservoirExSize) {
      v.push_back("topological input needs gridWidth x gridHeight == reservoirExSize");
    }
    atLeast("inputSquareSide", p.inputSquareSide, 1);
    if (p.inputSquareX < 0 || p.inputSquareY < 0 ||
        p.inputSquareX + p.inputSquareSide > p.gridWidth ||
        p.inputSquareY + p.inputSquareSide > p.gridHeight) {
      v.push_back("input square does not fit into the grid");
    }
  }
  if (mode == InputMode::kLeaveNOut) {
    if (p.inputLeaveOutCount < 0 || p.inputLeaveOutCount >= p.inputNumTargetNeurons) {
      v.push_back("inputLeaveOutCount: must lie in [0, inputNumTargetNeurons)");
    }
  }
  if (mode == InputMode::kAlternating) {
    atLeast("inputRegionCount", p.inputRegionCount, 2);
    if (static_cast<long long>(p.inputRegionCount) * p.inputNumTargetNeurons >
        p.reservoirExSize) {
      v.push_back("inputRegionCount x inputNumTargetNeurons exceeds reservoirExSize");
    }
  }

  atLeast("noiseNeurons", p.noiseNeurons, 0);
  if (p.noiseNeurons > reservoirSize) v.push_back("noiseNeurons: exceeds reservoir size");

  if (p.outputIsPooling) {
    atLeast("outputSize", p.outputSize, 1);
    if (p.outputSize > p.reservoirExSize) {
      v.push_back("outputSize: more pools than excitatory neurons");
    }
  }

  static const std::vector<std::string> levels = {"trace", "debug", "info", "warn", "error"};
  if (std::find(levels.begin(), levels.end(), p.logLevel) == levels.end()) {
    v.push_back("logLevel: expected one of trace, debug, info, warn, error");
  }
  atLeast("plotWidth", p.plotWidth, 1);
  atLeast("plotHeight", p.plotHeight, 1);
  atLeast("threads", p.threads, 1);
  return v;
}

DerivedParameters derive(const ParameterSet& p) {
  if (auto violations = validate(p); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  DerivedParameters d;
  d.reservoirSize = p.reservoirExSize + p.reservoirInSize;
  d.totalSteps = static_cast<long long>(p.trials) * p.stepsPerTrial;
  d.coreCount = (d.reservoirSize + p.neuronsPerCore - 1) / p.neuronsPerCore;
  d.chunkCount = d.coreCount * d.coreCount;
  d.inputMode = inputModeOf(p);
  switch (d.inputMode) {
    case InputMode::kNone:
      break;
    case InputMode::kSequence:
      d.stepsPerInput = p.inputSteps;
      for (int k = 0; k < p.inputSequenceSize; ++k) {
        d.inputWindows.emplace_back(k * p.inputSteps, (k + 1) * p.inputSteps);
      }
      break;
    default:
      d.stepsPerInput = p.inputSteps;
      d.inputWindows.emplace_back(0, p.inputSteps);
      break;
  }
  d.weightMax = p.learningWeightMax > 0.0 ? p.learningWeightMax : 2.0 * p.weightExMean;
  return d;
}

void to_json(nlohmann::json& j, const DerivedParameters& d) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& [start, end] : d.inputWindows) windows.push_back({start, end});
  j = {{"reservoirSize", d.reservoirSize},
       {"totalSteps", d.totalSteps},
       {"coreCount", d.coreCount},
       {"chunkCount", d.chunkCount},
       {"inputMode", toString(d.inputMode)},
       {"stepsPerInput", d.stepsPerInput},
       {"inputWindows", windows},
       {"weightMax", d.weightMax}};
}

nlohmann::json resolvedDocument(const ParameterSet& p, const DerivedParameters& d) {
  nlohmann::json params = p;
  nlohmann::json system = nlohmann::json::object();
  for (const auto& key : systemParameterNames()) system[key] = params[key];
  return {{"parameters", params}, {"system", system}, {"derived", d}};
}

}  // namespace lavanet
