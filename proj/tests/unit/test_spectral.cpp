#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "lavanet/errors.hpp"
#include "lavanet/sparse.hpp"

using namespace lavanet;

namespace {

double eigenOracle(const DenseMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d[i][j];
  }
  return Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues().cwiseAbs().maxCoeff();
}

DenseMatrix randomDense(std::size_t n, double fill, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> value(0.0, 1.0);
  DenseMatrix d(n, std::vector<double>(n, 0.0));
  for (auto& row : d) {
    for (auto& x : row) {
      if (unit(rng) < fill) x = value(rng);
    }
  }
  return d;
}

// Boolean pattern powers; a pattern with P^n = 0 has only zero eigenvalues.
bool nilpotentPattern(const DenseMatrix& d) {
  const std::size_t n = d.size();
  std::vector<std::vector<bool>> p(n, std::vector<bool>(n)), q;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p[i][j] = d[i][j] != 0.0;
  }
  auto power = p;
  for (std::size_t k = 1; k < n; ++k) {
    q.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (!power[i][l]) continue;
        for (std::size_t j = 0; j < n; ++j) q[i][j] = q[i][j] || p[l][j];
      }
    }
    power = q;
  }
  for (const auto& row : power) {
    for (bool x : row) {
      if (x) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Spectral, Swap) { EXPECT_NEAR(spectralRadius(SparseMatrix::fromDense({{0, 1}, {1, 0}})), 1.0, 1e-12); }

TEST(Spectral, Identity) { EXPECT_NEAR(spectralRadius(SparseMatrix::identity(5)), 1.0, 1e-12); }

TEST(Spectral, Rotation) {
  // Complex pair of modulus 2.
  EXPECT_NEAR(spectralRadius(SparseMatrix::fromDense({{0, -2}, {2, 0}})), 2.0, 1e-12);
}

TEST(Spectral, NilpotentAndEmpty) {
  EXPECT_NEAR(spectralRadius(SparseMatrix::fromDense({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}})), 0.0, 1e-12);
  EXPECT_EQ(spectralRadius(SparseMatrix(0, 0)), 0.0);
  EXPECT_EQ(spectralRadius(SparseMatrix(4, 4)), 0.0);
}

TEST(Spectral, NonSquare) { EXPECT_THROW(spectralRadius(SparseMatrix(3, 4)), NonSquare); }

TEST(Spectral, Random12MatchesDenseEigensolver) {
  std::mt19937_64 rng(12);
  const auto d = randomDense(12, 1.0, rng);
  const double expected = eigenOracle(d);
  EXPECT_NEAR(spectralRadius(SparseMatrix::fromDense(d)), expected, 1e-5 * expected);
}

TEST(Spectral, SparseRandomMatchesDenseEigensolver) {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + rng() % 48;
    const auto d = randomDense(n, 0.05 + 0.9 * std::uniform_real_distribution<double>()(rng), rng);
    const double got = spectralRadius(SparseMatrix::fromDense(d));
    if (nilpotentPattern(d)) {
      EXPECT_EQ(got, 0.0) << "n=" << n;
      continue;
    }
    const double expected = eigenOracle(d);
    EXPECT_NEAR(got, expected, 1e-5 * expected) << "n=" << n;
  }
}

TEST(Spectral, ReservoirScaleAgreesWithEigen) {
  std::mt19937_64 rng(4);
  DenseMatrix d(200, std::vector<double>(200, 0.0));
  std::uniform_int_distribution<int> pick(0, 199);
  std::lognormal_distribution<double> mag(0.0, 0.5);
  for (std::size_t j = 0; j < 200; ++j) {
    for (int c = 0; c < 20; ++c) {
      const auto i = static_cast<std::size_t>(pick(rng));
      if (i != j) d[i][j] = (j < 160 ? 1.0 : -4.0) * mag(rng);
    }
  }
  const double expected = eigenOracle(d);
  EXPECT_NEAR(spectralRadius(SparseMatrix::fromDense(d)), expected, 1e-6 * expected);
}

TEST(Spectral, StrictlyTriangularIsExactlyZero) {
  DenseMatrix d(20, std::vector<double>(20, 0.0));
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = i + 1; j < 20; ++j) d[i][j] = 1.0 + static_cast<double>(i + j);
  }
  EXPECT_EQ(spectralRadius(SparseMatrix::fromDense(d)), 0.0);
}

TEST(Spectral, BlockTriangularTakesLargestBlock) {
  // Two cycles joined by a one-way edge: eigenvalues are those of the blocks.
  const DenseMatrix d = {{0, 2, 0, 0, 0},
                         {2, 0, 5, 0, 0},
                         {0, 0, 0, 3, 0},
                         {0, 0, 3, 0, 0},
                         {0, 0, 0, 0, -4}};
  EXPECT_NEAR(spectralRadius(SparseMatrix::fromDense(d)), 4.0, 1e-12);
  EXPECT_NEAR(eigenOracle(d), 4.0, 1e-12);
}
