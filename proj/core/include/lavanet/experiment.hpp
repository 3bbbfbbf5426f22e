#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lavanet/engine.hpp"
#include "lavanet/params.hpp"
#include "lavanet/probes.hpp"
#include "lavanet/stimulus.hpp"

namespace lavanet {

enum class LogLevel { kTrace, kDebug, kInfo, kWarn, kError };
LogLevel logLevelFromString(const std::string& name);
std::string toString(LogLevel level);

/// Timestamped record of the lifecycle. Entries below the threshold are
/// dropped; kept entries go to memory and, once attached, to a file.
class RunLog {
 public:
  struct Entry {
    std::string timestamp;  // UTC, ISO 8601 with milliseconds
    LogLevel level;
    std::string phase;
    std::string message;
  };

  explicit RunLog(LogLevel threshold = LogLevel::kInfo) : threshold_(threshold) {}

  void attach(const std::filesystem::path& file);
  void log(LogLevel level, const std::string& phase, const std::string& message);
  void info(const std::string& phase, const std::string& message) {
    log(LogLevel::kInfo, phase, message);
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool contains(const std::string& phase, const std::string& messagePrefix) const;

 private:
  LogLevel threshold_;
  std::vector<Entry> entries_;
  std::ofstream file_;
};

enum class LifecyclePhase { kOnInit, kAfterBuild, kAfterRun };
std::string toString(LifecyclePhase phase);

class Experiment;
using Hook = std::function<void(Experiment&)>;

struct ExperimentOptions {
  /// Create the run directory and write artifacts into it.
  bool persist = true;
  /// onInit hooks must be known before create() returns.
  std::vector<Hook> onInit;
};

/// Everything assembled by build().
struct Network {
  SparseMatrix initialWeights;
  CoreLayout layout;
  InputPlan inputPlan;
  std::optional<SpikeGenerator> noise;
  std::optional<PoolingReadout> readout;
  std::optional<RuleAst> rule;
  std::unique_ptr<Simulation> simulation;
  std::unique_ptr<ProbeStore> probes;
};

/// Post-processed results of run().
struct RunResults {
  ProbeData probes;
  std::vector<SpikeEvent> outputSpikes;  // (global step, output index)
  long long firstStep = 0;
  double seconds = 0.0;

  std::vector<SpikeEvent> excitatorySpikes(std::size_t nEx) const;
  std::vector<SpikeEvent> inhibitorySpikes(std::size_t nEx) const;
};

/// Lifecycle orchestrator: create -> build -> run, with hooks at onInit,
/// afterBuild and afterRun.
class Experiment {
 public:
  /// Resolves defaults + overrides and validates them (ValidationError
  /// lists every violation). Creates `<outputDirectory>/<timestamp>-<name>/`
  /// when persisting, then fires onInit.
  static std::unique_ptr<Experiment> create(const std::string& name,
                                            const nlohmann::json& overrides = nlohmann::json::object(),
                                            ExperimentOptions options = {});

  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  /// Weights -> layout/split -> stimulus -> noise -> output -> probes ->
  /// rule, then afterBuild. Failures are rethrown as PhaseError nesting the
  /// original exception.
  void build();

  /// All trials, post-processing, afterRun hooks, then artifacts.
  void run();

  /// Runs only trial k on a freshly built network and records its steps.
  /// Used to compare a trial against the same trial inside a full run.
  void runSingleTrial(int trial);

  /// Throws HookTooLate when the phase already fired.
  void registerHook(LifecyclePhase phase, Hook hook);

  const std::string& name() const { return name_; }
  const ParameterSet& parameters() const { return params_; }
  const DerivedParameters& derived() const { return derived_; }
  const std::filesystem::path& runDirectory() const { return runDirectory_; }
  const Network& network() const { return network_; }
  const RunResults& results() const { return results_; }
  const RunLog& log() const { return log_; }
  const std::vector<std::string>& buildSteps() const { return buildSteps_; }
  bool built() const { return built_; }
  bool finished() const { return ran_; }

 private:
  Experiment(std::string name, ParameterSet params, DerivedParameters derived, bool persist);

  void fire(LifecyclePhase phase);
  template <typename F>
  void inPhase(const std::string& phase, F&& body);
  void assemble();
  SparseMatrix initialWeightMatrix() const;
  void executeTrials(int firstTrial, int lastTrial);
  void writeArtifacts();

  std::string name_;
  ParameterSet params_;
  DerivedParameters derived_;
  bool persist_;
  std::filesystem::path runDirectory_;
  RunLog log_;
  Network network_;
  RunResults results_;
  std::vector<std::string> buildSteps_;
  std::vector<std::pair<LifecyclePhase, Hook>> hooks_;
  bool fired_[3] = {false, false, false};
  bool built_ = false;
  bool ran_ = false;
};

/// `<root>/<YYYYMMDD-HHMMSS>-<name>`, with `-2`, `-3`, ... appended if taken.
std::filesystem::path uniqueRunDirectory(const std::filesystem::path& root, const std::string& name,
                                         std::chrono::system_clock::time_point when);

}  // namespace lavanet
