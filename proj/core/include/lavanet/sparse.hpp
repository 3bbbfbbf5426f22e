#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lavanet {

using Index = std::uint32_t;
using DenseMatrix = std::vector<std::vector<double>>;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Entry (i, j) is the weight of the connection
/// from neuron j to neuron i: rows are targets, columns are sources, so a
/// row dotted with a spike vector yields the synaptic input of neuron i.
///
/// The sparsity pattern is fixed at construction. Values may be changed in
/// place (plasticity), which can leave structurally present zeros; matrices
/// built from dense data or triplets never store zeros.
class SparseMatrix {
 public:
  struct RowView {
    std::span<const Index> columns;
    std::span<const double> values;
  };

  SparseMatrix() = default;

  /// Empty rows x cols matrix.
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Adopts raw CSR arrays after checking the structural invariants.
  /// Throws CsrFormatError when they are violated.
  static SparseMatrix fromCsr(std::size_t rows, std::size_t cols, std::vector<Index> rowPointers,
                              std::vector<Index> columnIndices, std::vector<double> values);

  /// Drops zeros. Throws ShapeMismatch on ragged input.
  static SparseMatrix fromDense(const DenseMatrix& dense);

  /// Builds from unordered triplets. Zero values are dropped; duplicate
  /// coordinates throw ShapeMismatch.
  static SparseMatrix fromTriplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  static SparseMatrix identity(std::size_t n);

  DenseMatrix toDense() const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  bool square() const { return rows_ == cols_; }

  std::span<const Index> rowPointers() const { return rowPointers_; }
  std::span<const Index> columnIndices() const { return columnIndices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutableValues() { return values_; }

  RowView row(std::size_t i) const;

  /// Value at (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  /// Number of stored entries in column j.
  std::size_t columnCount(std::size_t j) const;

  /// Copies the [rowBegin, rowEnd) x [colBegin, colEnd) block, reindexed locally.
  SparseMatrix block(std::size_t rowBegin, std::size_t rowEnd, std::size_t colBegin,
                     std::size_t colEnd) const;

  /// Empty string when all CSR invariants hold, otherwise a description.
  std::string checkInvariants() const;

  bool operator==(const SparseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Index> rowPointers_ = {0};
  std::vector<Index> columnIndices_;
  std::vector<double> values_;
};

// CSR text format:
//   csr <rows> <cols> <nnz>
//   <rowPointers...>
//   <columnIndices...>
//   <values...>
// Values are written in shortest round-trip form, so read(write(m)) == m bit for bit.
void writeCsr(std::ostream& out, const SparseMatrix& m);
SparseMatrix readCsr(std::istream& in);
void saveCsr(const std::string& path, const SparseMatrix& m);
SparseMatrix loadCsr(const std::string& path);

/// Largest eigenvalue modulus, taken over the strongly connected components
/// of the nonzero pattern: dense Hessenberg QR for components up to
/// kDenseSpectralCutoff rows, power-iteration growth estimate above it.
inline constexpr std::size_t kDenseSpectralCutoff = 2048;
double spectralRadius(const SparseMatrix& m);

}  // namespace lavanet
