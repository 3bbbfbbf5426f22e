// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <unistd.h>

#include "lavanet/experiment.hpp"
#include "lavanet/partition.hpp"
#include "lavanet/plasticity.hpp"
#include "lavanet/sparse.hpp"
#include "support/oracles.hpp"

using namespace lavanet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kPartitionSeconds = 10.0;
constexpr double kPlasticityAbs = 1e-9;
constexpr double kInputRateTarget = 0.8;
constexpr double kInputRateBand = 0.04;
constexpr double kReferenceRunSeconds = 60.0;
constexpr double kSpectralRel = 1e-5;

const char* kReferenceRule = "2^-2*x1*y0 - 2^-2*y1*x0 + 2^-4*x1*y1*y0 - 2^-3*y0*w*w";

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

double secondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool bitIdentical(const SparseMatrix& a, const SparseMatrix& b) {
  if (!(a.rows() == b.rows() && a.cols() == b.cols() && a.nnz() == b.nnz())) return false;
  if (!std::equal(a.rowPointers().begin(), a.rowPointers().end(), b.rowPointers().begin()) ||
      !std::equal(a.columnIndices().begin(), a.columnIndices().end(), b.columnIndices().begin())) {
    return false;
  }
  for (std::size_t k = 0; k < a.nnz(); ++k) {
    if (std::bit_cast<std::uint64_t>(a.values()[k]) != std::bit_cast<std::uint64_t>(b.values()[k])) {
      return false;
    }
  }
  return true;
}

std::unique_ptr<Experiment> runExperiment(const std::string& name, const json& overrides,
                                          bool persist) {
  auto exp = Experiment::create(name, overrides, {persist, {}});
  exp->build();
  exp->run();
  return exp;
}

Outcome partitionInvariance(const fs::path&) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  json cfg = {{"reservoirExSize", 96}, {"reservoirInSize", 24}, {"trials", 5},
              {"stepsPerTrial", 60},   {"inputNumTargetNeurons", 20},
              {"isLearningRule", false}, {"seed", 2024}};
  SpikeRaster reference;
  for (int perCore : {120, 60, 40, 30}) {
    cfg["neuronsPerCore"] = perCore;
    const auto exp = runExperiment("partition", cfg, false);
    const auto& raster = exp->results().probes.raster;
    const auto cores = exp->network().layout.coreCount();
    if (perCore == 120) {
      reference = raster;
      o.require(raster.steps() == 300 && raster.neurons() == 120, "unexpected raster shape");
      o.require(raster.count() > 0, "reference run is silent");
    } else {
      o.require(raster == reference, std::to_string(cores) + "-core raster differs");
    }
  }
  const double seconds = secondsSince(start);
  o.require(seconds < kPartitionSeconds, "took " + std::to_string(seconds) + " s");
  if (o.pass) {
    o.detail = "1/2/3/4 cores bit-identical, " + std::to_string(reference.count()) + " spikes, " +
               std::to_string(seconds) + " s";
  }
  return o;
}

Outcome chunkCombinatorics(const fs::path&) {
  Outcome o;
  const auto layout = computeLayout(12, 4);
  o.require(layout.coreCount() == 3, "12/4 gives " + std::to_string(layout.coreCount()) + " cores");
  o.require(chunkCount(layout) == 9, "12/4 gives " + std::to_string(chunkCount(layout)) + " chunks");
  for (std::size_t cores = 1; cores <= 8; ++cores) {
    for (std::size_t perCore : {1u, 4u, 100u, 1024u}) {
      for (std::size_t n = (cores - 1) * perCore + 1; n <= cores * perCore; n += std::max<std::size_t>(1, perCore / 3)) {
        const auto l = computeLayout(n, perCore);
        o.require(l.coreCount() == cores && chunkCount(l) == cores * cores,
                  "chunkCount mismatch at n=" + std::to_string(n));
      }
    }
  }
  if (o.pass) o.detail = "12 neurons / 4 per core -> 3 cores, 9 chunks; chunkCount = cores^2 for 1..8";
  return o;
}

Outcome splitMergeRoundTrip(const fs::path&) {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> value(0.0, 50.0);
  std::size_t checks = 0;
  for (int m = 0; m < 200; ++m) {
    const std::size_t n = 1 + rng() % 64;
    const double fill = 0.5 * unit(rng);
    DenseMatrix d(n, std::vector<double>(n, 0.0));
    for (auto& row : d) {
      for (auto& x : row) {
        if (unit(rng) < fill) x = value(rng);
      }
    }
    const auto w = SparseMatrix::fromDense(d);
    for (std::size_t perCore : {3u, 5u, 8u, 64u}) {
      const auto back = merge(split(w, computeLayout(n, perCore)));
      o.require(bitIdentical(back, w), "mismatch for N=" + std::to_string(n) + ", perCore=" +
                                           std::to_string(perCore));
      ++checks;
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " round trips exact";
  return o;
}

Outcome ruleParser(const fs::path&) {
  Outcome o;
  const auto ast = parseRule(kReferenceRule);
  const std::vector<int> signs = {1, -1, 1, -1};
  const std::vector<double> coefficients = {0.25, 0.25, 0.0625, 0.125};
  const std::vector<std::vector<Variable>> factors = {
      {Variable::kX1, Variable::kY0},
      {Variable::kX0, Variable::kY1},
      {Variable::kX1, Variable::kY0, Variable::kY1},
      {Variable::kY0, Variable::kW, Variable::kW}};
  o.require(ast.terms.size() == 4, "expected 4 terms, got " + std::to_string(ast.terms.size()));
  for (std::size_t k = 0; o.pass && k < 4; ++k) {
    auto got = ast.terms[k].factors;
    std::sort(got.begin(), got.end());
    o.require(ast.terms[k].sign == signs[k], "sign of term " + std::to_string(k));
    o.require(ast.terms[k].coefficient == coefficients[k], "coefficient of term " + std::to_string(k));
    o.require(got == factors[k], "factors of term " + std::to_string(k));
  }

  static const char* vars[] = {"x0", "x1", "y0", "y1", "y2", "w"};
  std::mt19937_64 rng(4);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  for (int r = 0; r < 1000 && o.pass; ++r) {
    std::string text = pick(2) ? "-" : "";
    const int terms = 1 + pick(5);
    for (int k = 0; k < terms; ++k) {
      if (k > 0) text += pick(2) ? " + " : " - ";
      const int count = 1 + pick(4);
      for (int f = 0; f < count; ++f) {
        if (f > 0) text += "*";
        switch (pick(3)) {
          case 0: text += "2^" + std::to_string(pick(13) - 6); break;
          case 1: text += std::to_string(1 + pick(9)) + "." + std::to_string(pick(100)); break;
          default: text += vars[pick(6)]; break;
        }
      }
    }
    const auto first = parseRule(text);
    o.require(parseRule(formatRule(first)) == first, "round trip failed for '" + text + "'");
  }
  if (o.pass) o.detail = "4 terms as expected; 1000 generated rules round-trip";
  return o;
}

Outcome plasticityOracle(const fs::path&) {
  Outcome o;
  const oracle::Dense w0 = {{0.0, 300.0}, {450.0, 0.0}};
  const double wMax = 600.0;
  const auto expected = oracle::simulatePlasticDense(
      w0, oracle::Lif{}, oracle::Traces{}, wMax, 50, [](long long t, std::size_t i) {
        if (i == 0) return t < 30 ? 350.0 : 0.0;
        return (t >= 10 && t < 50) ? 260.0 : 0.0;
      });

  Simulation sim(split(SparseMatrix::fromDense(w0), computeLayout(2, 1)), NeuronConfig{});
  auto drive = [](std::size_t neuron, double current, long long a, long long b) {
    SpikeGenerator g;
    g.targetNeurons = {neuron};
    g.activeWindows = {{a, b}};
    g.spikeProb = 1.0;
    g.injectedWeight = current;
    return g;
  };
  sim.setGenerators({drive(0, 350.0, 0, 30), drive(1, 260.0, 10, 50)});
  PlasticityConfig pc;
  pc.rule = parseRule(kReferenceRule);
  pc.plasticNeurons = 2;
  pc.weightMax = wMax;
  sim.enablePlasticity(pc);
  double worst = 0.0;
  for (long long t = 0; t < 50; ++t) {
    const auto spikes = sim.step(t);
    o.require(spikes[0] == expected.spikes[t][0] && spikes[1] == expected.spikes[t][1],
              "spike mismatch at step " + std::to_string(t));
    const auto w = merge(sim.weights());
    worst = std::max({worst, std::abs(w.at(0, 1) - expected.weights[t][0][1]),
                      std::abs(w.at(1, 0) - expected.weights[t][1][0])});
  }
  o.require(worst <= kPlasticityAbs, "max deviation " + std::to_string(worst));
  o.require(expected.weights.back()[0][1] != 300.0, "weights never changed");
  if (o.pass) {
    std::ostringstream s;
    s << "50 steps, max |dw| deviation " << worst;
    o.detail = s.str();
  }
  return o;
}

// Ten-line recurrence oracle, independent of the engine.
long long firstSpikeRecurrence(double c) {
  double u = 0.0, v = 0.0;
  for (long long t = 0; t < 100000; ++t) {
    u = u * (1.0 - 1.0 / 5.0) + c;
    v = v * (1.0 - 1.0 / 100.0) + u;
    if (v >= 1200.0) return t;
  }
  return -1;
}

Outcome lifClosedForm(const fs::path&) {
  Outcome o;
  std::size_t checked = 0;
  for (double c = 3.0; c <= 1500.0; c *= 1.37) {
    const long long expected = firstSpikeRecurrence(c);
    const long long closed = oracle::firstSpikeClosedForm(c, oracle::Lif{}, 100000);
    SpikeGenerator g;
    g.targetNeurons = {0};
    g.activeWindows = {{0, 100000}};
    g.spikeProb = 1.0;
    g.injectedWeight = c;
    Simulation sim(split(SparseMatrix::fromDense({{0.0}}), computeLayout(1, 1)), NeuronConfig{});
    sim.setGenerators({g});
    long long first = -1;
    for (long long t = 0; t <= expected && first < 0; ++t) {
      if (sim.step(t)[0]) first = t;
    }
    o.require(first == expected && closed == expected,
              "c=" + std::to_string(c) + ": engine " + std::to_string(first) + ", recurrence " +
                  std::to_string(expected) + ", closed form " + std::to_string(closed));
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " currents, first spike step exact";
  return o;
}

Outcome referenceRun(const fs::path& scratch) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto exp = runExperiment(
      "reference", {{"outputDirectory", (scratch / "reference").string()}, {"isRasterPlot", true}},
      true);
  const double seconds = secondsSince(start);
  const auto& p = exp->parameters();
  const auto& data = exp->results().probes;
  o.require(p.reservoirExSize == 400 && p.trials == 10 && p.stepsPerTrial == 60 &&
                p.inputSequenceSize == 3 && p.inputGenSpikeProb == 0.8,
            "defaults differ from the reference configuration");
  o.require(data.raster.steps() == 600, "raster spans " + std::to_string(data.raster.steps()) + " steps");

  const auto& plan = exp->network().inputPlan;
  std::vector<std::vector<std::size_t>> hits(10, std::vector<std::size_t>(3, 0));
  for (const auto& e : data.generatorEvents) {
    if (e.generator < 3) ++hits[static_cast<std::size_t>(e.step / 60)][e.generator];
  }
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    for (std::size_t w = 0; w < 3; ++w) {
      const auto& s = plan.trials[k][w];
      const double pairs = static_cast<double>(s.targets.size()) * (s.window.second - s.window.first);
      const double rate = static_cast<double>(hits[k][w]) / pairs;
      lo = std::min(lo, rate);
      hi = std::max(hi, rate);
      o.require(std::abs(rate - kInputRateTarget) <= kInputRateBand,
                "trial " + std::to_string(k) + " window " + std::to_string(w) + " rate " +
                    std::to_string(rate));
    }
  }
  const auto svg = slurp(exp->runDirectory() / "raster.svg");
  std::size_t boundaries = 0;
  for (auto pos = svg.find("trial-boundary"); pos != std::string::npos;
       pos = svg.find("trial-boundary", pos + 1)) {
    ++boundaries;
  }
  o.require(boundaries == 10, std::to_string(boundaries) + " trial boundaries in raster.svg");
  o.require(seconds < kReferenceRunSeconds, "took " + std::to_string(seconds) + " s");
  std::ostringstream s;
  s << "input rates in [" << lo << ", " << hi << "], 600 steps, " << boundaries
    << " trial boundaries, " << seconds << " s";
  if (o.pass) o.detail = s.str();
  else o.detail += " (" + s.str() + ")";
  return o;
}

Outcome resetSemantics(const fs::path&) {
  Outcome o;
  const json cfg = {{"isLearningRule", false}, {"resetBetweenTrials", true}, {"noiseNeurons", 50}};
  const auto full = runExperiment("full", cfg, false);
  const auto& raster = full->results().probes.raster;
  for (int k = 0; k < 10; ++k) {
    auto single = Experiment::create("single", cfg, {false, {}});
    single->build();
    single->runSingleTrial(k);
    o.require(single->results().probes.raster == raster.slice(k * 60, (k + 1) * 60),
              "trial " + std::to_string(k) + " differs");
  }
  if (o.pass) o.detail = "10 trials equal 10 single-trial runs, " + std::to_string(raster.count()) + " spikes";
  return o;
}

fs::path determinismRunDirectory;

Outcome determinism(const fs::path& scratch) {
  Outcome o;
  std::vector<fs::path> runs;
  for (int threads : {1, 1, 4, 4}) {
    const auto exp = runExperiment(
        "determinism", {{"outputDirectory", (scratch / "determinism").string()}, {"threads", threads}},
        true);
    runs.push_back(exp->runDirectory());
  }
  std::vector<std::string> files = {"spikes_ex.csv", "spikes_in.csv"};
  for (int k = 0; k < 10; ++k) files.push_back("weights_trial_" + std::to_string(k) + ".csr");
  for (const auto& f : files) {
    const auto reference = slurp(runs[0] / f);
    o.require(!reference.empty(), f + " missing");
    for (std::size_t r = 1; r < runs.size(); ++r) {
      o.require(slurp(runs[r] / f) == reference, f + " differs in run " + std::to_string(r));
    }
  }
  determinismRunDirectory = runs[0];
  if (o.pass) o.detail = "4 runs (threads 1,1,4,4): " + std::to_string(files.size()) + " files byte-identical";
  return o;
}

Outcome snapshotReuse(const fs::path& scratch) {
  Outcome o;
  fs::path source = determinismRunDirectory;
  if (source.empty()) {
    source = runExperiment("snapshot", {{"outputDirectory", (scratch / "snapshot").string()}}, true)
                 ->runDirectory();
  }
  std::size_t checked = 0;
  for (int k : {0, 4, 9}) {
    const auto file = source / ("weights_trial_" + std::to_string(k) + ".csr");
    const auto snapshot = loadCsr(file.string());
    auto exp = Experiment::create("reuse", {{"weightInitFile", file.string()}}, {false, {}});
    exp->build();
    o.require(bitIdentical(merge(exp->network().simulation->weights()), snapshot),
              "step-0 weights differ from snapshot " + std::to_string(k));
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " snapshots reloaded bit-exactly";
  return o;
}

Outcome spectralRadiusOracle(const fs::path&) {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> value(0.0, 1.0);
  double worst = 0.0;
  for (int m = 0; m < 50; ++m) {
    const auto n = static_cast<Eigen::Index>(1 + rng() % 32);
    const double fill = 0.1 + 0.9 * unit(rng);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    DenseMatrix rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (unit(rng) < fill) {
          dense(i, j) = value(rng);
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dense(i, j);
        }
      }
    }
    const double expected = Eigen::EigenSolver<Eigen::MatrixXd>(dense, false).eigenvalues().cwiseAbs().maxCoeff();
    const double got = spectralRadius(SparseMatrix::fromDense(rows));
    const double rel = expected == 0.0 ? std::abs(got) : std::abs(got - expected) / expected;
    worst = std::max(worst, rel);
    o.require(rel <= kSpectralRel, "matrix " + std::to_string(m) + " relative error " + std::to_string(rel));
  }
  if (o.pass) {
    std::ostringstream s;
    s << "50 matrices, max relative error " << worst;
    o.detail = s.str();
  }
  return o;
}

}  // namespace

int main() {
  const auto scratch = fs::temp_directory_path() / ("lavanet-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome(const fs::path&)>>> criteria = {
      {"partition invariance", partitionInvariance},
      {"chunk combinatorics", chunkCombinatorics},
      {"split/merge round trip", splitMergeRoundTrip},
      {"learning-rule parser", ruleParser},
      {"plasticity scalar oracle", plasticityOracle},
      {"LIF closed form", lifClosedForm},
      {"reference run input rates", referenceRun},
      {"reset semantics", resetSemantics},
      {"determinism", determinism},
      {"CSR snapshot reuse", snapshotReuse},
      {"spectral radius", spectralRadiusOracle},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome outcome;
    try {
      outcome = criteria[k].second(scratch);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << (k + 1) << "] " << criteria[k].first
              << ": " << outcome.detail << std::endl;
  }
  fs::remove_all(scratch);
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
