#include "lavanet/raster_svg.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lavanet/errors.hpp"

namespace lavanet {

namespace {

constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 16.0;
constexpr double kBottom = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string colorFor(const std::string& pool) {
  if (pool == "ex") return "#1f77b4";
  if (pool == "in") return "#d62728";
  return "#2ca02c";
}

}  // namespace

std::string renderRasterSvg(const RasterPlot& plot) {
  const double width = std::max(plot.width, 200);
  const double height = std::max(plot.height, 120);
  const double plotW = width - kLeft - kRight;
  const double plotH = height - kTop - kBottom;
  std::size_t totalRows = 0;
  for (const auto& pool : plot.pools) totalRows = std::max(totalRows, pool.rowOffset + pool.rows);
  const double steps = static_cast<double>(std::max<long long>(plot.totalSteps, 1));
  const double rows = static_cast<double>(std::max<std::size_t>(totalRows, 1));
  auto xOf = [&](double t) { return kLeft + t / steps * plotW; };
  auto yOf = [&](double row) { return kTop + row / rows * plotH; };
  const double radius = std::clamp(std::min(plotW / steps, plotH / rows) * 0.45, 0.4, 2.5);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Input windows sit under everything else.
  if (plot.stepsPerTrial > 0) {
    for (int k = 0; k < plot.trials; ++k) {
      const double origin = static_cast<double>(k) * plot.stepsPerTrial;
      for (const auto& [start, end] : plot.inputWindows) {
        svg << "<rect class=\"input-window\" x=\"" << num(xOf(origin + start)) << "\" y=\""
            << num(kTop) << "\" width=\"" << num(xOf(origin + end) - xOf(origin + start))
            << "\" height=\"" << num(plotH) << "\" fill=\"#ff7f0e\" fill-opacity=\"0.15\"/>\n";
      }
    }
    for (int k = 0; k < plot.trials; ++k) {
      const std::string x = num(xOf(static_cast<double>(k) * plot.stepsPerTrial));
      svg << "<line class=\"trial-boundary\" x1=\"" << x << "\" y1=\"" << num(kTop) << "\" x2=\""
          << x << "\" y2=\"" << num(kTop + plotH) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    }
  }

  svg << "<line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plotH) << "\" x2=\""
      << num(kLeft + plotW) << "\" y2=\"" << num(kTop + plotH) << "\" stroke=\"black\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
      << num(kLeft) << "\" y2=\"" << num(kTop + plotH) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(kLeft + plotW / 2) << "\" y=\"" << num(height - 10)
      << "\" text-anchor=\"middle\" font-size=\"12\">step</text>\n";
  svg << "<text x=\"14\" y=\"" << num(kTop + plotH / 2) << "\" font-size=\"12\" transform=\"rotate(-90 14 "
      << num(kTop + plotH / 2) << ")\" text-anchor=\"middle\">neuron</text>\n";
  svg << "<text x=\"" << num(kLeft) << "\" y=\"" << num(kTop + plotH + 14)
      << "\" font-size=\"10\" text-anchor=\"middle\">0</text>\n";
  svg << "<text x=\"" << num(kLeft + plotW) << "\" y=\"" << num(kTop + plotH + 14)
      << "\" font-size=\"10\" text-anchor=\"middle\">" << plot.totalSteps << "</text>\n";

  for (const auto& pool : plot.pools) {
    svg << "<g class=\"pool\" id=\"pool-" << pool.name << "\" fill=\"" << pool.color << "\">\n";
    for (const auto& e : pool.events) {
      const double row = static_cast<double>(pool.rowOffset + e.neuron) + 0.5;
      svg << "<circle class=\"spike " << pool.name << "\" cx=\""
          << num(xOf(static_cast<double>(e.step) + 0.5)) << "\" cy=\"" << num(yOf(row)) << "\" r=\""
          << num(radius) << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

RasterPlot loadRunRaster(const std::string& runDirectory, const std::vector<std::string>& pools) {
  namespace fs = std::filesystem;
  const fs::path dir(runDirectory);
  std::ifstream paramsFile(dir / "parameters.json");
  if (!paramsFile) throw Error("missing " + (dir / "parameters.json").string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(paramsFile);
  } catch (const nlohmann::json::exception& e) {
    throw Error("unreadable parameters.json: " + std::string(e.what()));
  }
  const auto& p = doc.at("parameters");
  const auto& d = doc.at("derived");
  RasterPlot plot;
  plot.totalSteps = d.at("totalSteps").get<long long>();
  plot.stepsPerTrial = p.at("stepsPerTrial").get<int>();
  plot.trials = p.at("trials").get<int>();
  for (const auto& w : d.at("inputWindows")) plot.inputWindows.emplace_back(w.at(0), w.at(1));
  const auto& sys = doc.at("system");
  plot.width = sys.at("plotWidth").get<int>();
  plot.height = sys.at("plotHeight").get<int>();

  const auto nEx = p.at("reservoirExSize").get<std::size_t>();
  const auto nIn = p.at("reservoirInSize").get<std::size_t>();
  const auto nOut = p.at("outputIsPooling").get<bool>() ? p.at("outputSize").get<std::size_t>() : 0;
  std::size_t nextRow = 0;
  for (const auto& name : pools) {
    RasterPool pool;
    pool.name = name;
    pool.color = colorFor(name);
    const fs::path csv = dir / ("spikes_" + name + ".csv");
    if (!fs::exists(csv)) throw Error("missing " + csv.string());
    pool.events = readSpikeCsv(csv.string());
    std::size_t firstNeuron = 0;
    if (name == "ex") {
      pool.rows = nEx;
    } else if (name == "in") {
      pool.rows = nIn;
      firstNeuron = nEx;
    } else if (name == "out") {
      pool.rows = nOut;
    } else {
      throw Error("unknown pool '" + name + "' (expected ex, in or out)");
    }
    for (auto& e : pool.events) e.neuron -= std::min(e.neuron, firstNeuron);
    pool.rowOffset = nextRow;
    nextRow += pool.rows;
    plot.pools.push_back(std::move(pool));
  }
  return plot;
}

}  // namespace lavanet
