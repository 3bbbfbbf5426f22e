#include "lavanet/experiment.hpp"

#include <ctime>
#include <exception>

#include "lavanet/errors.hpp"
#include "lavanet/raster_svg.hpp"
#include "lavanet/rng.hpp"
#include "lavanet/weights.hpp"

namespace lavanet {

namespace fs = std::filesystem;

std::string toString(LifecyclePhase phase) {
  switch (phase) {
    case LifecyclePhase::kOnInit: return "onInit";
    case LifecyclePhase::kAfterBuild: return "afterBuild";
    case LifecyclePhase::kAfterRun: return "afterRun";
  }
  return "unknown";
}

std::vector<SpikeEvent> RunResults::excitatorySpikes(std::size_t nEx) const {
  auto events = probes.raster.events(0, std::min(nEx, probes.raster.neurons()));
  for (auto& e : events) e.step += firstStep;
  return events;
}

std::vector<SpikeEvent> RunResults::inhibitorySpikes(std::size_t nEx) const {
  auto events = probes.raster.events(std::min(nEx, probes.raster.neurons()), probes.raster.neurons());
  for (auto& e : events) e.step += firstStep;
  return events;
}

fs::path uniqueRunDirectory(const fs::path& root, const std::string& name,
                            std::chrono::system_clock::time_point when) {
  const auto seconds = std::chrono::system_clock::to_time_t(when);
  std::tm tm{};
  localtime_r(&seconds, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const std::string base = std::string(stamp) + "-" + name;
  fs::path candidate = root / base;
  for (int suffix = 2; fs::exists(candidate); ++suffix) {
    candidate = root / (base + "-" + std::to_string(suffix));
  }
  return candidate;
}

Experiment::Experiment(std::string name, ParameterSet params, DerivedParameters derived,
                       bool persist)
    : name_(std::move(name)),
      params_(std::move(params)),
      derived_(std::move(derived)),
      persist_(persist),
      log_(logLevelFromString(params_.logLevel)) {}

std::unique_ptr<Experiment> Experiment::create(const std::string& name,
                                               const nlohmann::json& overrides,
                                               ExperimentOptions options) {
  ParameterSet params = merge(defaults(), overrides);
  DerivedParameters derived = derive(params);
  std::unique_ptr<Experiment> exp(new Experiment(name, params, derived, options.persist));

  if (exp->persist_) {
    exp->runDirectory_ =
        uniqueRunDirectory(params.outputDirectory, name, std::chrono::system_clock::now());
    fs::create_directories(exp->runDirectory_);
    std::ofstream out(exp->runDirectory_ / "parameters.json");
    out << resolvedDocument(params, derived).dump(2) << '\n';
    if (!out) throw Error("cannot write parameters.json in " + exp->runDirectory_.string());
    exp->log_.attach(exp->runDirectory_ / "run.log");
  }
  exp->log_.info("init", "experiment '" + name + "' created, seed " + std::to_string(params.seed));
  if (exp->persist_) exp->log_.info("init", "run directory " + exp->runDirectory_.string());

  for (auto& hook : options.onInit) exp->hooks_.emplace_back(LifecyclePhase::kOnInit, std::move(hook));
  exp->fire(LifecyclePhase::kOnInit);
  return exp;
}

void Experiment::registerHook(LifecyclePhase phase, Hook hook) {
  if (fired_[static_cast<int>(phase)]) {
    throw HookTooLate("phase " + toString(phase) + " has already run");
  }
  hooks_.emplace_back(phase, std::move(hook));
}

void Experiment::fire(LifecyclePhase phase) {
  fired_[static_cast<int>(phase)] = true;
  for (auto& [p, hook] : hooks_) {
    if (p == phase) hook(*this);
  }
}

template <typename F>
void Experiment::inPhase(const std::string& phase, F&& body) {
  try {
    body();
  } catch (const PhaseError&) {
    throw;
  } catch (const std::exception& e) {
    log_.log(LogLevel::kError, phase, std::string("failed: ") + e.what());
    std::throw_with_nested(PhaseError(phase, e.what()));
  }
}

SparseMatrix Experiment::initialWeightMatrix() const {
  const auto nEx = static_cast<std::size_t>(params_.reservoirExSize);
  const auto nIn = static_cast<std::size_t>(params_.reservoirInSize);
  const auto n = nEx + nIn;
  if (!params_.weightInitFile.empty()) {
    SparseMatrix w = loadCsr(params_.weightInitFile);
    if (w.rows() != n || w.cols() != n) {
      throw ShapeMismatch("weightInitFile is " + std::to_string(w.rows()) + "x" +
                          std::to_string(w.cols()) + ", reservoir has " + std::to_string(n) +
                          " neurons");
    }
    if (auto problem = checkDaleAndDiagonal(w, nEx); !problem.empty()) {
      throw ShapeMismatch("weightInitFile: " + problem);
    }
    return w;
  }

  auto rng = rng::makeEngine(params_.seed, rng::StreamKind::kWeights);
  const auto k = static_cast<std::size_t>(params_.reservoirConnPerNeuron);
  switch (params_.weightInit) {
    case WeightInit::kConstant:
      return initConstant(nEx, nIn, k, params_.weightExMean, params_.weightInMean, rng).full;
    case WeightInit::kNormal:
      return initRandom(nEx, nIn, k, WeightDistribution::normal(params_.weightExMean, params_.weightSigma),
                        WeightDistribution::normal(params_.weightInMean, params_.weightSigma), rng)
          .full;
    case WeightInit::kLogNormal:
      return initRandom(nEx, nIn, k,
                        WeightDistribution::logNormal(params_.weightExMean, params_.weightSigma),
                        WeightDistribution::logNormal(params_.weightInMean, params_.weightSigma), rng)
          .full;
    case WeightInit::kAnisotropic2d: {
      AnisotropicConfig cfg;
      cfg.gridWidth = static_cast<std::size_t>(params_.gridWidth);
      cfg.gridHeight = static_cast<std::size_t>(params_.gridHeight);
      cfg.shiftMagnitude = params_.anisoShift;
      cfg.profileSigma = params_.anisoSigma;
      cfg.cellSize = static_cast<std::size_t>(params_.anisoCellSize);
      return initAnisotropic(cfg, nEx, nIn, k,
                             WeightDistribution::logNormal(params_.weightExMean, params_.weightSigma),
                             WeightDistribution::logNormal(params_.weightInMean, params_.weightSigma),
                             rng)
          .full;
    }
  }
  throw Error("unhandled weight initialization");
}

void Experiment::assemble() {
  const auto nEx = static_cast<std::size_t>(params_.reservoirExSize);
  const auto n = static_cast<std::size_t>(derived_.reservoirSize);

  network_.initialWeights = initialWeightMatrix();
  buildSteps_.push_back("weights");
  log_.info("build", "weights: " + toString(params_.weightInit) + ", " +
                         std::to_string(network_.initialWeights.nnz()) + " synapses");

  network_.layout = computeLayout(n, static_cast<std::size_t>(params_.neuronsPerCore));
  ChunkGrid chunks = split(network_.initialWeights, network_.layout);
  NeuronConfig neuron{params_.voltageTau, params_.currentTau, params_.thresholdMant,
                      params_.refractoryDelay};
  network_.simulation = std::make_unique<Simulation>(chunks, neuron,
                                                     static_cast<std::size_t>(params_.threads));
  buildSteps_.push_back("layout");
  log_.info("build", "layout: " + std::to_string(network_.layout.coreCount()) + " cores, " +
                         std::to_string(chunkCount(network_.layout)) + " chunks");

  network_.inputPlan = buildInputPlan(params_);
  buildSteps_.push_back("stimulus");
  log_.info("build", "stimulus: " + toString(network_.inputPlan.mode) + ", " +
                         std::to_string(network_.inputPlan.regions.size()) + " target sets");

  if (params_.noiseNeurons > 0) {
    network_.noise = buildNoise(static_cast<std::size_t>(params_.noiseNeurons), n,
                                params_.noiseSpikeProb, params_.noiseWeight, derived_.totalSteps,
                                params_.seed);
  }
  buildSteps_.push_back("noise");
  log_.info("build", "noise: " + std::to_string(params_.noiseNeurons) + " neurons");

  if (params_.outputIsPooling) {
    network_.readout.emplace(nEx, static_cast<std::size_t>(params_.outputSize),
                             params_.outputWeight, neuron);
  }
  buildSteps_.push_back("output");
  log_.info("build", std::string("output: ") +
                         (params_.outputIsPooling ? std::to_string(params_.outputSize) + " pools"
                                                  : "none"));

  network_.probes = std::make_unique<ProbeStore>(network_.layout, derived_.totalSteps,
                                                 params_.isVoltageProbe);
  network_.simulation->setObserver(network_.probes.get());
  buildSteps_.push_back("probes");
  log_.info("build", "probes: " + std::to_string(network_.layout.coreCount()) + " cores");

  if (params_.isLearningRule) {
    network_.rule = parseRule(params_.learningRule);
    PlasticityConfig plasticity;
    plasticity.rule = *network_.rule;
    plasticity.traces = {params_.traceTauPre, params_.traceTauPost, params_.traceTauPost2,
                         params_.traceImpulse};
    plasticity.plasticNeurons = nEx;
    plasticity.weightMax = derived_.weightMax;
    plasticity.epoch = params_.learningEpoch;
    network_.simulation->enablePlasticity(plasticity);
    log_.info("build", "rule: " + formatRule(*network_.rule));
  } else {
    log_.info("build", "rule: none");
  }
  buildSteps_.push_back("rule");
}

void Experiment::build() {
  if (built_) throw Error("experiment already built");
  inPhase("build", [&] { assemble(); });
  built_ = true;
  log_.info("build", "build complete");
  fire(LifecyclePhase::kAfterBuild);
}

void Experiment::executeTrials(int firstTrial, int lastTrial) {
  Simulation& sim = *network_.simulation;
  const long long spt = params_.stepsPerTrial;
  const auto nEx = static_cast<std::size_t>(params_.reservoirExSize);
  results_.firstStep = firstTrial * spt;
  if (firstTrial != 0 || lastTrial != params_.trials) {
    network_.probes = std::make_unique<ProbeStore>(network_.layout, (lastTrial - firstTrial) * spt,
                                                   params_.isVoltageProbe, true, firstTrial * spt);
    sim.setObserver(network_.probes.get());
  }

  for (int k = firstTrial; k < lastTrial; ++k) {
    log_.info("run", "trial " + std::to_string(k) + " start");
    auto generators = generatorsForTrial(network_.inputPlan, k, params_.stepsPerTrial, params_.seed);
    if (network_.noise) generators.push_back(*network_.noise);
    sim.setGenerators(std::move(generators));

    for (long long s = 0; s < spt; ++s) {
      const long long t = k * spt + s;
      if (network_.readout) {
        const auto out = network_.readout->poolAndStep(sim.lastSpikes().subspan(0, nEx));
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (out[i]) results_.outputSpikes.push_back({t, i});
        }
      }
      sim.step(t);
    }
    if (params_.isWeightProbe) network_.probes->addWeightSnapshot(sim.weights());
    if (params_.resetBetweenTrials) {
      sim.resetTrial(params_.resetTracesBetweenTrials);
      if (network_.readout) network_.readout->reset();
    }
    log_.info("run", "trial " + std::to_string(k) + " end");
  }
}

void Experiment::run() {
  if (!built_) throw Error("build() must precede run()");
  if (ran_) throw Error("run() may be called only once per build");
  ran_ = true;
  const auto start = std::chrono::steady_clock::now();
  inPhase("run", [&] {
    executeTrials(0, params_.trials);
    results_.probes = network_.probes->postProcess();
  });
  results_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log_.info("run", "run complete: " + std::to_string(results_.probes.raster.count()) +
                       " reservoir spikes in " + std::to_string(results_.seconds) + " s");
  fire(LifecyclePhase::kAfterRun);
  if (persist_) inPhase("artifacts", [&] { writeArtifacts(); });
}

void Experiment::runSingleTrial(int trial) {
  if (!built_) throw Error("build() must precede run()");
  if (ran_) throw Error("run() may be called only once per build");
  if (trial < 0 || trial >= params_.trials) throw Error("trial index out of range");
  ran_ = true;
  const auto start = std::chrono::steady_clock::now();
  inPhase("run", [&] {
    executeTrials(trial, trial + 1);
    results_.probes = network_.probes->postProcess();
  });
  results_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log_.info("run", "run complete: trial " + std::to_string(trial) + " only");
  fire(LifecyclePhase::kAfterRun);
  if (persist_) inPhase("artifacts", [&] { writeArtifacts(); });
}

void Experiment::writeArtifacts() {
  const auto nEx = static_cast<std::size_t>(params_.reservoirExSize);
  std::vector<std::string> pools;
  if (params_.isExSpikeProbe) {
    writeSpikeCsv((runDirectory_ / "spikes_ex.csv").string(), results_.excitatorySpikes(nEx));
    pools.push_back("ex");
  }
  if (params_.isInSpikeProbe) {
    writeSpikeCsv((runDirectory_ / "spikes_in.csv").string(), results_.inhibitorySpikes(nEx));
    pools.push_back("in");
  }
  if (params_.isOutSpikeProbe && params_.outputIsPooling) {
    writeSpikeCsv((runDirectory_ / "spikes_out.csv").string(), results_.outputSpikes);
    pools.push_back("out");
  }
  const int firstTrial = static_cast<int>(results_.firstStep / params_.stepsPerTrial);
  for (std::size_t k = 0; k < results_.probes.weights.size(); ++k) {
    const auto file = "weights_trial_" + std::to_string(firstTrial + static_cast<int>(k)) + ".csr";
    saveCsr((runDirectory_ / file).string(), results_.probes.weights[k]);
  }
  if (params_.isRasterPlot) {
    const auto plot = loadRunRaster(runDirectory_.string(), pools);
    std::ofstream svg(runDirectory_ / "raster.svg");
    svg << renderRasterSvg(plot);
    if (!svg) throw Error("cannot write raster.svg");
  }
  log_.info("artifacts", "written to " + runDirectory_.string());
}

}  // namespace lavanet
