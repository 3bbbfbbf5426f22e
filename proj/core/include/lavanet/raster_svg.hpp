#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lavanet/params.hpp"
#include "lavanet/probes.hpp"

namespace lavanet {

/// One population drawn in its own color and band of rows.
struct RasterPool {
  std::string name;   // ex, in, out
  std::string color;
  std::vector<SpikeEvent> events;  // neuron indices are rows relative to rowOffset
  std::size_t rowOffset = 0;       // first plot row of this pool
  std::size_t rows = 0;
};

struct RasterPlot {
  long long totalSteps = 0;
  int stepsPerTrial = 0;
  int trials = 0;
  std::vector<StepWindow> inputWindows;  // per trial, relative to the trial start
  std::vector<RasterPool> pools;
  int width = 1200;
  int height = 600;
};

/// Spike scatter with trial separators and shaded input windows. Every spike
/// is one `<circle class="spike ...">` element.
std::string renderRasterSvg(const RasterPlot& plot);

/// Builds a plot from a run directory (parameters.json plus spike CSVs).
/// `pools` selects among ex, in, out. Throws Error when a file is missing.
RasterPlot loadRunRaster(const std::string& runDirectory, const std::vector<std::string>& pools);

}  // namespace lavanet
