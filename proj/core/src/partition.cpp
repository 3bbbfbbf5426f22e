#include "lavanet/partition.hpp"

#include <algorithm>
#include <string>

#include "lavanet/errors.hpp"

namespace lavanet {

std::size_t CoreLayout::coreOf(std::size_t i) const {
  auto it = std::upper_bound(ranges.begin(), ranges.end(), i,
                             [](std::size_t v, const NeuronRange& r) { return v < r.end; });
  if (it == ranges.end()) throw ShapeMismatch("neuron " + std::to_string(i) + " outside layout");
  return static_cast<std::size_t>(it - ranges.begin());
}

CoreLayout computeLayout(std::size_t neuronCount, std::size_t neuronsPerCore) {
  if (neuronsPerCore < 1 || neuronsPerCore > kMaxNeuronsPerCore) {
    throw PerCoreOutOfRange(std::to_string(neuronsPerCore) +
                            " neurons per core exceeds 1024 compartments per core"
                            " or is below 1");
  }
  if (neuronCount < 1) throw ShapeMismatch("a layout needs at least one neuron");
  CoreLayout layout;
  for (std::size_t begin = 0; begin < neuronCount; begin += neuronsPerCore) {
    layout.ranges.push_back({begin, std::min(begin + neuronsPerCore, neuronCount)});
  }
  return layout;
}

std::size_t chunkCount(const CoreLayout& layout) {
  return layout.coreCount() * layout.coreCount();
}

ChunkGrid::ChunkGrid(CoreLayout layout, std::vector<SparseMatrix> chunks)
    : layout_(std::move(layout)), chunks_(std::move(chunks)) {
  checkShapes();
}

void ChunkGrid::checkShapes() const {
  const std::size_t cores = layout_.coreCount();
  if (chunks_.size() != cores * cores) {
    throw InconsistentChunkShapes("expected " + std::to_string(cores * cores) + " chunks, got " +
                                  std::to_string(chunks_.size()));
  }
  for (std::size_t a = 0; a < cores; ++a) {
    for (std::size_t b = 0; b < cores; ++b) {
      const auto& c = chunk(a, b);
      if (c.rows() != layout_.ranges[a].size() || c.cols() != layout_.ranges[b].size()) {
        throw InconsistentChunkShapes(
            "chunk (" + std::to_string(a) + ", " + std::to_string(b) + ") is " +
            std::to_string(c.rows()) + "x" + std::to_string(c.cols()) + ", expected " +
            std::to_string(layout_.ranges[a].size()) + "x" + std::to_string(layout_.ranges[b].size()));
      }
    }
  }
}

std::size_t ChunkGrid::totalNnz() const {
  std::size_t total = 0;
  for (const auto& c : chunks_) total += c.nnz();
  return total;
}

ChunkGrid split(const SparseMatrix& w, const CoreLayout& layout) {
  if (!w.square() || w.rows() != layout.neuronCount()) {
    throw ShapeMismatch("matrix " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                        " does not match a layout of " + std::to_string(layout.neuronCount()) +
                        " neurons");
  }
  std::vector<SparseMatrix> chunks;
  chunks.reserve(chunkCount(layout));
  for (const auto& target : layout.ranges) {
    for (const auto& source : layout.ranges) {
      chunks.push_back(w.block(target.begin, target.end, source.begin, source.end));
    }
  }
  return ChunkGrid(layout, std::move(chunks));
}

SparseMatrix merge(const ChunkGrid& grid) {
  grid.checkShapes();
  const auto& layout = grid.layout();
  const std::size_t n = layout.neuronCount();
  std::vector<Index> rowPointers(n + 1, 0);
  std::vector<Index> columnIndices;
  std::vector<double> values;
  columnIndices.reserve(grid.totalNnz());
  values.reserve(grid.totalNnz());
  // Row i of the merged matrix is the concatenation of row (i - begin_a) of
  // chunks (a, 0..C-1); source ranges are ordered, so columns stay sorted.
  for (std::size_t a = 0; a < grid.coreCount(); ++a) {
    const auto& target = layout.ranges[a];
    for (std::size_t local = 0; local < target.size(); ++local) {
      for (std::size_t b = 0; b < grid.coreCount(); ++b) {
        const auto row = grid.chunk(a, b).row(local);
        const auto offset = static_cast<Index>(layout.ranges[b].begin);
        for (std::size_t k = 0; k < row.columns.size(); ++k) {
          columnIndices.push_back(row.columns[k] + offset);
          values.push_back(row.values[k]);
        }
      }
      rowPointers[target.begin + local + 1] = static_cast<Index>(values.size());
    }
  }
  return SparseMatrix::fromCsr(n, n, std::move(rowPointers), std::move(columnIndices),
                               std::move(values));
}

}  // namespace lavanet
