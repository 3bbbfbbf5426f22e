#pragma once

#include <cstddef>
#include <vector>

#include "lavanet/sparse.hpp"

namespace lavanet {

/// Hardware limit: a core time-multiplexes at most this many compartments.
inline constexpr std::size_t kMaxNeuronsPerCore = 1024;

struct NeuronRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool operator==(const NeuronRange&) const = default;
};

/// Contiguous assignment of neurons to cores: core c owns ranges[c].
struct CoreLayout {
  std::vector<NeuronRange> ranges;

  std::size_t coreCount() const { return ranges.size(); }
  std::size_t neuronCount() const { return ranges.empty() ? 0 : ranges.back().end; }
  /// Core holding global neuron i.
  std::size_t coreOf(std::size_t i) const;
  bool operator==(const CoreLayout&) const = default;
};

/// Throws PerCoreOutOfRange unless 1 <= neuronsPerCore <= 1024.
CoreLayout computeLayout(std::size_t neuronCount, std::size_t neuronsPerCore);

/// Number of connection matrices needed to allow every core-to-core link.
std::size_t chunkCount(const CoreLayout& layout);

/// chunk(a, b) holds the connections from core b's neurons into core a's
/// neurons, indexed locally (rows: range a, cols: range b). Empty chunks are
/// kept, so there are always coreCount^2 of them.
class ChunkGrid {
 public:
  ChunkGrid() = default;
  ChunkGrid(CoreLayout layout, std::vector<SparseMatrix> chunks);

  const CoreLayout& layout() const { return layout_; }
  std::size_t coreCount() const { return layout_.coreCount(); }
  std::size_t size() const { return chunks_.size(); }

  const SparseMatrix& chunk(std::size_t target, std::size_t source) const {
    return chunks_[target * coreCount() + source];
  }
  SparseMatrix& chunk(std::size_t target, std::size_t source) {
    return chunks_[target * coreCount() + source];
  }

  std::size_t totalNnz() const;

  /// Throws InconsistentChunkShapes if any chunk disagrees with the layout.
  void checkShapes() const;

 private:
  CoreLayout layout_;
  std::vector<SparseMatrix> chunks_;  // row-major by (target core, source core)
};

/// Throws ShapeMismatch unless w is square with layout.neuronCount() rows.
ChunkGrid split(const SparseMatrix& w, const CoreLayout& layout);

/// Exact inverse of split. Throws InconsistentChunkShapes.
SparseMatrix merge(const ChunkGrid& grid);

}  // namespace lavanet
