#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <random>
#include <sstream>

#include "lavanet/errors.hpp"
#include "lavanet/sparse.hpp"
#include "support/oracles.hpp"

using namespace lavanet;

namespace {

DenseMatrix randomDense(std::size_t rows, std::size_t cols, double fill, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> value(0.0, 10.0);
  DenseMatrix d(rows, std::vector<double>(cols, 0.0));
  for (auto& row : d) {
    for (auto& x : row) {
      if (unit(rng) < fill) x = value(rng);
    }
  }
  return d;
}

}  // namespace

TEST(Sparse, FromDenseSmall) {
  const auto m = SparseMatrix::fromDense({{0, 1}, {2, 0}});
  EXPECT_EQ(std::vector<Index>(m.rowPointers().begin(), m.rowPointers().end()),
            (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(std::vector<Index>(m.columnIndices().begin(), m.columnIndices().end()),
            (std::vector<Index>{1, 0}));
  EXPECT_EQ(std::vector<double>(m.values().begin(), m.values().end()),
            (std::vector<double>{1, 2}));
}

TEST(Sparse, AllZeroIsEmpty) {
  const auto m = SparseMatrix::fromDense(DenseMatrix(3, std::vector<double>(3, 0.0)));
  EXPECT_EQ(m.nnz(), 0u);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m.checkInvariants(), "");
}

TEST(Sparse, DenseRoundTripRandomized) {
  std::mt19937_64 rng(11);
  for (std::size_t r = 0; r <= 12; ++r) {
    for (std::size_t c = 0; c <= 12; ++c) {
      const auto d = randomDense(r, c, 0.4, rng);
      const auto m = SparseMatrix::fromDense(d);
      EXPECT_EQ(m.checkInvariants(), "");
      if (r > 0) {
        EXPECT_EQ(m.toDense(), d);
      }
    }
  }
  for (int k = 0; k < 20; ++k) {
    const auto d = randomDense(64, 64, 0.3, rng);
    EXPECT_EQ(SparseMatrix::fromDense(d).toDense(), d);
  }
  const auto d = randomDense(20, 20, 0.3, rng);
  EXPECT_EQ(SparseMatrix::fromDense(d).toDense(), d);
}

TEST(Sparse, TripletsMatchDense) {
  std::mt19937_64 rng(3);
  const auto d = randomDense(17, 9, 0.3, rng);
  std::vector<Triplet> triplets;
  for (Index i = 0; i < 17; ++i) {
    for (Index j = 0; j < 9; ++j) {
      if (d[i][j] != 0.0) triplets.push_back({i, j, d[i][j]});
    }
  }
  std::shuffle(triplets.begin(), triplets.end(), rng);
  EXPECT_EQ(SparseMatrix::fromTriplets(17, 9, triplets), SparseMatrix::fromDense(d));
  triplets.push_back(triplets.front());
  EXPECT_THROW(SparseMatrix::fromTriplets(17, 9, triplets), ShapeMismatch);
}

TEST(Sparse, FromCsrChecksInvariants) {
  EXPECT_NO_THROW(SparseMatrix::fromCsr(2, 2, {0, 1, 2}, {1, 0}, {1.0, 2.0}));
  EXPECT_THROW(SparseMatrix::fromCsr(2, 2, {0, 2, 1}, {1, 0}, {1.0, 2.0}), CsrFormatError);
  EXPECT_THROW(SparseMatrix::fromCsr(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}), CsrFormatError);
  EXPECT_THROW(SparseMatrix::fromCsr(2, 2, {0, 1, 2}, {1, 2}, {1.0, 2.0}), CsrFormatError);
  EXPECT_THROW(SparseMatrix::fromCsr(2, 2, {1, 1, 2}, {1, 0}, {1.0, 2.0}), CsrFormatError);
  EXPECT_THROW(SparseMatrix::fromCsr(2, 2, {0, 1}, {1}, {1.0}), CsrFormatError);
}

TEST(Sparse, AtAndColumnCount) {
  const auto m = SparseMatrix::fromDense({{0, 3, 0}, {4, 0, 5}, {0, 6, 0}});
  EXPECT_EQ(m.at(0, 1), 3.0);
  EXPECT_EQ(m.at(1, 1), 0.0);
  EXPECT_EQ(m.columnCount(1), 2u);
  EXPECT_EQ(m.columnCount(2), 1u);
  const auto row = m.row(1);
  ASSERT_EQ(row.columns.size(), 2u);
  EXPECT_EQ(row.columns[1], 2u);
  EXPECT_EQ(row.values[1], 5.0);
}

TEST(Sparse, BlockExtraction) {
  std::mt19937_64 rng(5);
  const auto d = randomDense(10, 10, 0.5, rng);
  const auto m = SparseMatrix::fromDense(d);
  const auto b = m.block(2, 7, 3, 9);
  ASSERT_EQ(b.rows(), 5u);
  ASSERT_EQ(b.cols(), 6u);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(b.at(i, j), d[i + 2][j + 3]);
  }
  EXPECT_EQ(m.block(0, 10, 0, 10), m);
}

TEST(Sparse, IdentityMatrix) {
  const auto id = SparseMatrix::identity(4);
  EXPECT_EQ(id.nnz(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(id.at(i, i), 1.0);
}

TEST(CsrText, FormatLayout) {
  const auto m = SparseMatrix::fromDense({{0, 1.5}, {-2, 0}});
  std::ostringstream out;
  writeCsr(out, m);
  EXPECT_EQ(out.str(), "csr 2 2 2\n0 1 2\n1 0\n1.5 -2\n");
}

TEST(CsrText, BitExactRoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> value(-1e3, 1e3);
  for (int k = 0; k < 50; ++k) {
    auto d = randomDense(1 + rng() % 30, 1 + rng() % 30, 0.3, rng);
    for (auto& row : d) {
      for (auto& x : row) {
        if (x != 0.0) x = value(rng) * std::pow(10.0, static_cast<double>(rng() % 40) - 20.0);
      }
    }
    const auto m = SparseMatrix::fromDense(d);
    std::stringstream buffer;
    writeCsr(buffer, m);
    const auto back = readCsr(buffer);
    ASSERT_EQ(back.nnz(), m.nnz());
    for (std::size_t i = 0; i < m.nnz(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(back.values()[i]),
                std::bit_cast<std::uint64_t>(m.values()[i]));
    }
    EXPECT_EQ(back, m);
  }
}

TEST(CsrText, StoredZerosSurvive) {
  auto m = SparseMatrix::fromDense({{0, 1}, {2, 0}});
  m.mutableValues()[0] = 0.0;
  std::stringstream buffer;
  writeCsr(buffer, m);
  const auto back = readCsr(buffer);
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.nnz(), 2u);
}

TEST(CsrText, MalformedInputIsRejected) {
  for (const char* text : {"", "dense 2 2 0\n0 0 0\n\n\n", "csr 2 2 1\n0 1 1\n5\n", "csr 2 2 1\n0 1 1\n1\nabc\n",
                           "csr 2 2 1\n0 1 1\n3\n1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(readCsr(in), CsrFormatError) << text;
  }
}

TEST(CsrText, FileRoundTrip) {
  const auto dir = oracle::freshDirectory("csr");
  const auto m = SparseMatrix::fromDense({{0, 0.1}, {0.2, 0}});
  saveCsr((dir / "w.csr").string(), m);
  EXPECT_EQ(loadCsr((dir / "w.csr").string()), m);
  EXPECT_THROW(loadCsr((dir / "missing.csr").string()), Error);
}
