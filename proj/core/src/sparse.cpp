#include "lavanet/sparse.hpp"

#include <algorithm>
#include <sstream>

#include "lavanet/errors.hpp"

namespace lavanet {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), rowPointers_(rows + 1, 0) {}

SparseMatrix SparseMatrix::fromCsr(std::size_t rows, std::size_t cols,
                                   std::vector<Index> rowPointers,
                                   std::vector<Index> columnIndices, std::vector<double> values) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.rowPointers_ = std::move(rowPointers);
  m.columnIndices_ = std::move(columnIndices);
  m.values_ = std::move(values);
  if (auto problem = m.checkInvariants(); !problem.empty()) throw CsrFormatError(problem);
  return m;
}

SparseMatrix SparseMatrix::fromDense(const DenseMatrix& dense) {
  const std::size_t rows = dense.size();
  const std::size_t cols = rows == 0 ? 0 : dense.front().size();
  SparseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (dense[i].size() != cols) throw ShapeMismatch("ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      if (dense[i][j] != 0.0) {
        m.columnIndices_.push_back(static_cast<Index>(j));
        m.values_.push_back(dense[i][j]);
      }
    }
    m.rowPointers_[i + 1] = static_cast<Index>(m.values_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::fromTriplets(std::size_t rows, std::size_t cols,
                                        std::vector<Triplet> triplets) {
  std::erase_if(triplets, [](const Triplet& t) { return t.value == 0.0; });
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.columnIndices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (t.row >= rows || t.col >= cols) throw ShapeMismatch("triplet outside matrix bounds");
    if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
      throw ShapeMismatch("duplicate triplet (" + std::to_string(t.row) + ", " +
                          std::to_string(t.col) + ")");
    }
    m.columnIndices_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.rowPointers_[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) m.rowPointers_[i + 1] += m.rowPointers_[i];
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m.columnIndices_.push_back(static_cast<Index>(i));
    m.values_.push_back(1.0);
    m.rowPointers_[i + 1] = static_cast<Index>(i + 1);
  }
  return m;
}

DenseMatrix SparseMatrix::toDense() const {
  DenseMatrix dense(rows_, std::vector<double>(cols_, 0.0));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (Index k = rowPointers_[i]; k < rowPointers_[i + 1]; ++k) {
      dense[i][columnIndices_[k]] = values_[k];
    }
  }
  return dense;
}

SparseMatrix::RowView SparseMatrix::row(std::size_t i) const {
  const std::size_t begin = rowPointers_[i];
  const std::size_t count = rowPointers_[i + 1] - begin;
  return {std::span<const Index>(columnIndices_).subspan(begin, count),
          std::span<const double>(values_).subspan(begin, count)};
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  const auto it = std::lower_bound(r.columns.begin(), r.columns.end(), static_cast<Index>(j));
  if (it == r.columns.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.columns.begin())];
}

std::size_t SparseMatrix::columnCount(std::size_t j) const {
  return static_cast<std::size_t>(
      std::count(columnIndices_.begin(), columnIndices_.end(), static_cast<Index>(j)));
}

SparseMatrix SparseMatrix::block(std::size_t rowBegin, std::size_t rowEnd, std::size_t colBegin,
                                 std::size_t colEnd) const {
  if (rowBegin > rowEnd || rowEnd > rows_ || colBegin > colEnd || colEnd > cols_) {
    throw ShapeMismatch("block range outside matrix");
  }
  SparseMatrix out(rowEnd - rowBegin, colEnd - colBegin);
  for (std::size_t i = rowBegin; i < rowEnd; ++i) {
    const auto r = row(i);
    auto first = std::lower_bound(r.columns.begin(), r.columns.end(), static_cast<Index>(colBegin));
    auto last = std::lower_bound(first, r.columns.end(), static_cast<Index>(colEnd));
    for (auto it = first; it != last; ++it) {
      out.columnIndices_.push_back(static_cast<Index>(*it - colBegin));
      out.values_.push_back(r.values[static_cast<std::size_t>(it - r.columns.begin())]);
    }
    out.rowPointers_[i - rowBegin + 1] = static_cast<Index>(out.values_.size());
  }
  return out;
}

std::string SparseMatrix::checkInvariants() const {
  std::ostringstream why;
  if (rowPointers_.size() != rows_ + 1) {
    why << "rowPointers has length " << rowPointers_.size() << ", expected " << rows_ + 1;
    return why.str();
  }
  if (rowPointers_.front() != 0) return "rowPointers[0] must be 0";
  if (rowPointers_.back() != values_.size() || columnIndices_.size() != values_.size()) {
    why << "rowPointers[rows]=" << rowPointers_.back() << ", columnIndices=" << columnIndices_.size()
        << ", values=" << values_.size() << " disagree";
    return why.str();
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rowPointers_[i] > rowPointers_[i + 1]) {
      why << "rowPointers decreases at row " << i;
      return why.str();
    }
    for (Index k = rowPointers_[i]; k < rowPointers_[i + 1]; ++k) {
      if (columnIndices_[k] >= cols_) {
        why << "column index " << columnIndices_[k] << " out of range in row " << i;
        return why.str();
      }
      if (k > rowPointers_[i] && columnIndices_[k - 1] >= columnIndices_[k]) {
        why << "column indices not strictly increasing in row " << i;
        return why.str();
      }
    }
  }
  return {};
}

}  // namespace lavanet
