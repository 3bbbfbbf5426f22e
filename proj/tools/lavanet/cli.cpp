#include "lavanet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lavanet/errors.hpp"
#include "lavanet/experiment.hpp"
#include "lavanet/partition.hpp"
#include "lavanet/raster_svg.hpp"

namespace lavanet::cli {

namespace {

namespace fs = std::filesystem;

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string name;
};

struct InfoOptions {
  long long neurons = 0;
  long long perCore = 0;
};

struct RasterOptions {
  std::string run;
  std::string out;
  std::string pools;
};

// Innermost exception of a nested chain decides the exit code.
int exitCodeFor(const std::exception& e) {
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    return exitCodeFor(inner);
  }
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const UnknownParameter*>(&e)) {
    return kValidationError;
  }
  return kRuntimeError;
}

int cmdRun(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  if (!fs::exists(opt.config)) {
    err << "error: config file not found: " << opt.config << '\n';
    return kValidationError;
  }
  nlohmann::json overrides;
  try {
    std::ifstream in(opt.config);
    overrides = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << opt.config << " is not valid JSON: " << e.what() << '\n';
    return kValidationError;
  }
  if (!overrides.is_object()) {
    err << "error: " << opt.config << " must hold a JSON object of parameter overrides\n";
    return kValidationError;
  }
  if (opt.seed) overrides["seed"] = *opt.seed;
  if (!opt.out.empty()) overrides["outputDirectory"] = opt.out;
  const std::string name = opt.name.empty() ? fs::path(opt.config).stem().string() : opt.name;

  std::unique_ptr<Experiment> exp;
  try {
    exp = Experiment::create(name, overrides);
  } catch (const ValidationError& e) {
    err << "error: invalid parameters\n";
    for (const auto& v : e.violations()) err << "  - " << v << '\n';
    return kValidationError;
  } catch (const UnknownParameter& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }

  try {
    exp->build();
    exp->run();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exitCodeFor(e);
  }

  const auto& p = exp->parameters();
  const auto& results = exp->results();
  const auto nEx = static_cast<std::size_t>(p.reservoirExSize);
  const auto& raster = results.probes.raster;
  out << "run_directory: " << exp->runDirectory().string() << '\n';
  out << "neurons: " << exp->derived().reservoirSize << '\n';
  out << "cores: " << exp->derived().coreCount << '\n';
  out << "steps: " << raster.steps() << '\n';
  out << "trials: " << p.trials << '\n';
  out << "spikes_ex: " << raster.countInRange(0, nEx) << '\n';
  out << "spikes_in: " << raster.countInRange(nEx, raster.neurons()) << '\n';
  if (p.outputIsPooling) {
    out << "spikes_out: " << results.outputSpikes.size() << '\n';
    std::vector<std::size_t> perPool(static_cast<std::size_t>(p.outputSize), 0);
    for (const auto& e : results.outputSpikes) ++perPool[e.neuron];
    for (std::size_t k = 0; k < perPool.size(); ++k) {
      out << "spikes_out_pool_" << k << ": " << perPool[k] << '\n';
    }
  }
  out << "weight_snapshots: " << results.probes.weights.size() << '\n';
  out << "runtime_s: " << results.seconds << '\n';
  return kOk;
}

int cmdInfo(const InfoOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.neurons <= 0 || opt.perCore <= 0) {
    err << "error: --neurons and --per-core must be positive\n";
    return kValidationError;
  }
  try {
    const auto layout = computeLayout(static_cast<std::size_t>(opt.neurons),
                                      static_cast<std::size_t>(opt.perCore));
    out << "cores: " << layout.coreCount() << ", chunks: " << chunkCount(layout) << '\n';
    for (std::size_t c = 0; c < layout.coreCount(); ++c) {
      const auto& r = layout.ranges[c];
      out << "core_" << c << ": " << r.size() << " neurons [" << r.begin << ", " << r.end << ")\n";
    }
  } catch (const PerCoreOutOfRange& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kOk;
}

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int cmdRaster(const RasterOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<std::string> pools;
  if (opt.pools.empty()) {
    pools = {"ex", "in"};
    if (fs::exists(fs::path(opt.run) / "spikes_out.csv")) pools.push_back("out");
  } else {
    pools = splitList(opt.pools);
    for (const auto& pool : pools) {
      if (pool != "ex" && pool != "in" && pool != "out") {
        err << "error: unknown pool '" << pool << "' (expected ex, in or out)\n";
        return kValidationError;
      }
    }
  }
  const fs::path target = opt.out.empty() ? fs::path(opt.run) / "raster.svg" : fs::path(opt.out);
  try {
    const auto plot = loadRunRaster(opt.run, pools);
    std::ofstream svg(target);
    svg << renderRasterSvg(plot);
    if (!svg) throw Error("cannot write " + target.string());
    std::size_t spikes = 0;
    for (const auto& pool : plot.pools) spikes += pool.events.size();
    out << "svg: " << target.string() << '\n';
    out << "spikes: " << spikes << '\n';
    out << "trials: " << plot.trials << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spiking reservoir simulator with per-core partitioning", "lavanet"};
  app.require_subcommand(1);

  RunOptions runOpt;
  auto* run = app.add_subcommand("run", "Run an experiment from a parameter-override JSON file");
  run->add_option("--config", runOpt.config, "Parameter override file")->required();
  run->add_option("--seed", runOpt.seed, "Override the master seed");
  run->add_option("--out", runOpt.out, "Parent directory of the run directory");
  run->add_option("--name", runOpt.name, "Experiment name (default: config file stem)");

  InfoOptions infoOpt;
  auto* info = app.add_subcommand("info", "Show the core layout of a network size");
  info->add_option("--neurons", infoOpt.neurons, "Total neuron count")->required();
  info->add_option("--per-core", infoOpt.perCore, "Neurons per core (at most 1024)")->required();

  RasterOptions rasterOpt;
  auto* raster = app.add_subcommand("raster", "Render the spike raster of a run directory as SVG");
  raster->add_option("--run", rasterOpt.run, "Run directory")->required();
  raster->add_option("--out", rasterOpt.out, "SVG file (default: <run>/raster.svg)");
  raster->add_option("--pools", rasterOpt.pools, "Comma-separated subset of ex,in,out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  if (*run) return cmdRun(runOpt, out, err);
  if (*info) return cmdInfo(infoOpt, out, err);
  return cmdRaster(rasterOpt, out, err);
}

}  // namespace lavanet::cli
