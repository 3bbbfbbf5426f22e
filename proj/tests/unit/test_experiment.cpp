#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "lavanet/errors.hpp"
#include "lavanet/experiment.hpp"
#include "lavanet/weights.hpp"
#include "support/oracles.hpp"

using namespace lavanet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json smallConfig(const fs::path& out) {
  return json{{"reservoirExSize", 80},   {"reservoirInSize", 20},
              {"reservoirConnPerNeuron", 12}, {"inputNumTargetNeurons", 10},
              {"trials", 3},             {"neuronsPerCore", 32},
              {"outputDirectory", out.string()}};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST(Experiment, HooksFireInOrder) {
  const auto dir = oracle::freshDirectory("hooks");
  std::vector<std::string> calls;
  ExperimentOptions options;
  options.onInit.push_back([&](Experiment& e) {
    calls.push_back("init");
    EXPECT_FALSE(e.built());
  });
  auto exp = Experiment::create("hooks", smallConfig(dir), options);
  exp->registerHook(LifecyclePhase::kAfterBuild, [&](Experiment& e) {
    calls.push_back("build");
    EXPECT_TRUE(e.built());
    EXPECT_FALSE(e.finished());
  });
  exp->registerHook(LifecyclePhase::kAfterRun, [&](Experiment& e) {
    calls.push_back("run");
    EXPECT_TRUE(e.finished());
  });
  EXPECT_THROW(exp->registerHook(LifecyclePhase::kOnInit, [](Experiment&) {}), HookTooLate);
  exp->build();
  EXPECT_THROW(exp->registerHook(LifecyclePhase::kAfterBuild, [](Experiment&) {}), HookTooLate);
  exp->run();
  EXPECT_EQ(calls, (std::vector<std::string>{"init", "build", "run"}));
  EXPECT_THROW(exp->registerHook(LifecyclePhase::kAfterRun, [](Experiment&) {}), HookTooLate);
}

TEST(Experiment, BuildOrderAndNetwork) {
  auto cfg = smallConfig("unused");
  cfg["outputIsPooling"] = true;
  cfg["outputSize"] = 4;
  cfg["noiseNeurons"] = 10;
  auto exp = Experiment::create("order", cfg, {false, {}});
  exp->build();
  EXPECT_EQ(exp->buildSteps(), (std::vector<std::string>{"weights", "layout", "stimulus", "noise",
                                                         "output", "probes", "rule"}));
  const auto& net = exp->network();
  EXPECT_EQ(net.layout.coreCount(), 4u);
  EXPECT_EQ(net.initialWeights.rows(), 100u);
  EXPECT_TRUE(net.noise.has_value());
  ASSERT_TRUE(net.readout.has_value());
  EXPECT_EQ(net.readout->size(), 4u);
  EXPECT_TRUE(net.rule.has_value());
  EXPECT_EQ(checkDaleAndDiagonal(net.initialWeights, 80), "");
  EXPECT_TRUE(exp->runDirectory().empty());
}

TEST(Experiment, RunOrderIsEnforced) {
  auto exp = Experiment::create("order", smallConfig("unused"), {false, {}});
  EXPECT_THROW(exp->run(), Error);
  exp->build();
  exp->run();
  EXPECT_THROW(exp->run(), Error);
}

TEST(Experiment, InvalidOverridesAreRejected) {
  EXPECT_THROW(Experiment::create("bad", json{{"bogus", 1}}, {false, {}}), UnknownParameter);
  try {
    Experiment::create("bad", json{{"inputGenSpikeProb", 1.5}, {"trials", 0}}, {false, {}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_GE(e.violations().size(), 2u);
  }
}

TEST(Experiment, BuildErrorsAreWrappedWithPhase) {
  auto cfg = smallConfig("unused");
  cfg["learningRule"] = "2^-1*d*x1";
  auto exp = Experiment::create("rule", cfg, {false, {}});
  try {
    exp->build();
    FAIL();
  } catch (const PhaseError& e) {
    EXPECT_EQ(e.phase(), "build");
    EXPECT_THROW(std::rethrow_if_nested(e), UnknownVariable);
  }
  EXPECT_TRUE(exp->log().contains("build", "failed"));
  EXPECT_FALSE(exp->built());
}

TEST(Experiment, ArtifactsAndLog) {
  const auto dir = oracle::freshDirectory("artifacts");
  auto cfg = smallConfig(dir);
  cfg["isRasterPlot"] = true;
  cfg["outputIsPooling"] = true;
  cfg["isOutSpikeProbe"] = true;
  cfg["outputSize"] = 4;
  auto exp = Experiment::create("art", cfg);
  exp->build();
  exp->run();
  const auto run = exp->runDirectory();
  EXPECT_EQ(run.parent_path(), dir);
  EXPECT_NE(run.filename().string().find("-art"), std::string::npos);
  for (const char* f : {"parameters.json", "run.log", "spikes_ex.csv", "spikes_in.csv",
                        "spikes_out.csv", "weights_trial_0.csr", "weights_trial_2.csr",
                        "raster.svg"}) {
    EXPECT_TRUE(fs::exists(run / f)) << f;
  }
  EXPECT_FALSE(fs::exists(run / "weights_trial_3.csr"));

  const auto doc = json::parse(slurp(run / "parameters.json"));
  EXPECT_EQ(doc.at("parameters").at("trials"), 3);
  EXPECT_EQ(doc.at("derived").at("totalSteps"), 180);
  EXPECT_EQ(merge(defaults(), doc.at("parameters")), exp->parameters());

  const auto ex = readSpikeCsv((run / "spikes_ex.csv").string());
  const auto in = readSpikeCsv((run / "spikes_in.csv").string());
  const auto& raster = exp->results().probes.raster;
  EXPECT_EQ(ex.size() + in.size(), raster.count());
  for (const auto& s : in) EXPECT_GE(s.neuron, 80u);
  for (const auto& s : ex) EXPECT_TRUE(raster.at(s.neuron, s.step));
  EXPECT_EQ(readSpikeCsv((run / "spikes_out.csv").string()), exp->results().outputSpikes);
  EXPECT_EQ(loadCsr((run / "weights_trial_2.csr").string()), exp->results().probes.weights[2]);

  const auto log = slurp(run / "run.log");
  for (const char* needle : {"[info] init:", "build: weights:", "build: build complete",
                             "run: trial 0 start", "run: trial 2 end", "run: run complete",
                             "artifacts: written"}) {
    EXPECT_NE(log.find(needle), std::string::npos) << needle;
  }
  EXPECT_TRUE(exp->log().contains("run", "trial 1 start"));
}

TEST(Experiment, SameSeedSameArtifacts) {
  const auto dir = oracle::freshDirectory("determinism");
  std::vector<fs::path> runs;
  for (int threads : {1, 4, 1}) {
    auto cfg = smallConfig(dir);
    cfg["threads"] = threads;
    cfg["noiseNeurons"] = 20;
    auto exp = Experiment::create("det", cfg);
    exp->build();
    exp->run();
    runs.push_back(exp->runDirectory());
  }
  EXPECT_NE(runs[0], runs[2]);
  for (const char* f : {"spikes_ex.csv", "spikes_in.csv", "weights_trial_0.csr",
                        "weights_trial_2.csr"}) {
    const auto reference = slurp(runs[0] / f);
    EXPECT_FALSE(reference.empty()) << f;
    EXPECT_EQ(slurp(runs[1] / f), reference) << f;
    EXPECT_EQ(slurp(runs[2] / f), reference) << f;
  }
  auto cfg = smallConfig(dir);
  cfg["seed"] = 99;
  auto other = Experiment::create("det", cfg);
  other->build();
  other->run();
  EXPECT_NE(slurp(other->runDirectory() / "spikes_ex.csv"), slurp(runs[0] / "spikes_ex.csv"));
}

TEST(Experiment, SnapshotReusedAsInitialMatrix) {
  const auto dir = oracle::freshDirectory("reuse");
  auto first = Experiment::create("first", smallConfig(dir));
  first->build();
  first->run();
  const auto snapshot = first->runDirectory() / "weights_trial_1.csr";
  auto cfg = smallConfig(dir);
  cfg["weightInitFile"] = snapshot.string();
  auto second = Experiment::create("second", cfg, {false, {}});
  second->build();
  const auto expected = loadCsr(snapshot.string());
  EXPECT_EQ(second->network().initialWeights, expected);
  EXPECT_EQ(merge(second->network().simulation->weights()), expected);
  EXPECT_NE(expected, first->network().initialWeights);

  cfg["weightInitFile"] = (dir / "missing.csr").string();
  auto broken = Experiment::create("broken", cfg, {false, {}});
  EXPECT_THROW(broken->build(), PhaseError);
}

TEST(Experiment, SingleTrialMatchesFullRun) {
  auto cfg = smallConfig("unused");
  cfg["isLearningRule"] = false;
  cfg["noiseNeurons"] = 15;
  auto full = Experiment::create("full", cfg, {false, {}});
  full->build();
  full->run();
  const auto& raster = full->results().probes.raster;
  ASSERT_GT(raster.count(), 0u);
  for (int k = 0; k < 3; ++k) {
    auto single = Experiment::create("single", cfg, {false, {}});
    single->build();
    single->runSingleTrial(k);
    EXPECT_EQ(single->results().firstStep, k * 60);
    EXPECT_EQ(single->results().probes.raster, raster.slice(k * 60, (k + 1) * 60)) << k;
  }
}

TEST(RunDirectory, CollisionsGetSuffixes) {
  const auto dir = oracle::freshDirectory("unique");
  const auto now = std::chrono::system_clock::now();
  const auto a = uniqueRunDirectory(dir, "x", now);
  fs::create_directories(a);
  const auto b = uniqueRunDirectory(dir, "x", now);
  fs::create_directories(b);
  const auto c = uniqueRunDirectory(dir, "x", now);
  EXPECT_NE(a, b);
  EXPECT_EQ(b.string(), a.string() + "-2");
  EXPECT_EQ(c.string(), a.string() + "-3");
  EXPECT_EQ(a.filename().string().size(), std::string("YYYYMMDD-HHMMSS-x").size());
}

TEST(RunLog, LevelsAndFormat) {
  EXPECT_EQ(logLevelFromString("debug"), LogLevel::kDebug);
  EXPECT_EQ(toString(LogLevel::kWarn), "warn");
  RunLog log(LogLevel::kWarn);
  log.info("p", "hidden");
  log.log(LogLevel::kError, "p", "shown");
  ASSERT_EQ(log.entries().size(), 1u);
  EXPECT_EQ(log.entries()[0].message, "shown");
  EXPECT_TRUE(log.contains("p", "sho"));
  EXPECT_FALSE(log.contains("q", "sho"));
}
