#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "lavanet/errors.hpp"
#include "lavanet/sparse.hpp"

namespace lavanet {

namespace {

// Row-major dense square matrix used by the eigenvalue routines below.
class Square {
 public:
  explicit Square(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// Diagonal similarity scaling by powers of two; leaves eigenvalues unchanged
// and improves the conditioning of the QR iteration.
void balance(Square& a) {
  constexpr double kRadix = 2.0;
  constexpr double kRadixSq = kRadix * kRadix;
  const std::size_t n = a.size();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kRadixSq;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadixSq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Reduction to upper Hessenberg form by stabilized elementary similarity
// transforms (Gaussian elimination with pivoting).
void toHessenberg(Square& a) {
  const std::size_t n = a.size();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double x = 0.0;
    std::size_t pivot = m;
    for (std::size_t j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        pivot = j;
      }
    }
    if (pivot != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(a(pivot, j), a(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, pivot), a(j, m));
    }
    if (x == 0.0) continue;
    for (std::size_t i = m + 1; i < n; ++i) {
      double y = a(i, m - 1);
      if (y == 0.0) continue;
      y /= x;
      a(i, m - 1) = y;
      for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
      for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
    }
  }
  for (std::size_t i = 2; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = 0.0;
  }
}

// Eigenvalues of an upper Hessenberg matrix by the shifted (Francis double
// shift) QR algorithm. Destroys `a`.
std::vector<std::complex<double>> hessenbergEigenvalues(Square& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::complex<double>> eig(a.size());
  const double eps = std::numeric_limits<double>::epsilon();
  auto A = [&](int i, int j) -> double& {
    return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(A(i, j));
  }

  int nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      // Look for a single small subdiagonal element.
      for (l = nn; l > 0; --l) {
        s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(A(l, l - 1)) <= eps * s) {
          A(l, l - 1) = 0.0;
          break;
        }
      }
      x = A(nn, nn);
      if (l == nn) {
        eig[static_cast<std::size_t>(nn)] = x + t;
        --nn;
      } else {
        y = A(nn - 1, nn - 1);
        w = A(nn, nn - 1) * A(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            eig[static_cast<std::size_t>(nn - 1)] = x + z;
            eig[static_cast<std::size_t>(nn)] = x + z;
            if (z != 0.0) eig[static_cast<std::size_t>(nn)] = x - w / z;
          } else {
            eig[static_cast<std::size_t>(nn)] = {x + p, -z};
            eig[static_cast<std::size_t>(nn - 1)] = {x + p, z};
          }
          nn -= 2;
        } else {
          if (its == 60) throw Error("eigenvalue iteration did not converge");
          if (its == 10 || its == 20) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i <= nn; ++i) A(i, i) -= x;
            s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = A(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / A(m + 1, m) + A(m, m + 1);
            q = A(m + 1, m + 1) - z - r - s;
            r = A(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            A(i + 2, i) = 0.0;
            if (i != m) A(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = A(k, k - 1);
              q = A(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = A(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = std::copysign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) A(k, k - 1) = -A(k, k - 1);
              } else {
                A(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = A(k, j) + q * A(k + 1, j);
                if (k + 1 != nn) {
                  p += r * A(k + 2, j);
                  A(k + 2, j) -= p * z;
                }
                A(k + 1, j) -= p * y;
                A(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * A(i, k) + y * A(i, k + 1);
                if (k + 1 != nn) {
                  p += z * A(i, k + 2);
                  A(i, k + 2) -= p * r;
                }
                A(i, k + 1) -= p * q;
                A(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return eig;
}

double denseSpectralRadius(const SparseMatrix& m) {
  Square a(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t k = 0; k < row.columns.size(); ++k) a(i, row.columns[k]) = row.values[k];
  }
  balance(a);
  toHessenberg(a);
  double radius = 0.0;
  for (const auto& lambda : hessenbergEigenvalues(a)) radius = std::max(radius, std::abs(lambda));
  return radius;
}

// Average logarithmic growth of ||A^k x||. Converges to log(rho) even when
// the dominant eigenvalues form a complex pair, at rate O(1/k).
double powerGrowthRadius(const SparseMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
  auto multiply = [&] {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = m.row(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < row.columns.size(); ++k) acc += row.values[k] * x[row.columns[k]];
      y[i] = acc;
      norm += acc * acc;
    }
    return std::sqrt(norm);
  };
  auto normalize = [&](double norm) {
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  };
  double norm = std::sqrt(static_cast<double>(n));
  for (auto& v : x) v /= norm;
  constexpr int kBurnIn = 200;
  constexpr int kIterations = 2000;
  for (int it = 0; it < kBurnIn; ++it) {
    norm = multiply();
    if (norm == 0.0) return 0.0;
    normalize(norm);
  }
  double logSum = 0.0;
  for (int it = 0; it < kIterations; ++it) {
    norm = multiply();
    if (norm == 0.0) return 0.0;
    logSum += std::log(norm);
    normalize(norm);
  }
  return std::exp(logSum / kIterations);
}

// Strongly connected components of the graph i -> j for every nonzero a_ij
// (iterative Tarjan). The spectrum is the union of the component spectra;
// a single-node component contributes its diagonal entry.
std::vector<std::vector<std::size_t>> stronglyConnectedComponents(const SparseMatrix& m) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = m.rows();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), stack;
  std::vector<bool> onStack(n, false);
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  std::vector<Frame> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto row = m.row(f.node);
      if (f.edge < row.columns.size()) {
        const std::size_t next = row.columns[f.edge];
        const bool edge = row.values[f.edge] != 0.0;
        ++f.edge;
        if (!edge) continue;
        if (index[next] == kUnvisited) {
          index[next] = low[next] = counter++;
          stack.push_back(next);
          onStack[next] = true;
          frames.push_back({next, 0});
        } else if (onStack[next]) {
          low[f.node] = std::min(low[f.node], index[next]);
        }
        continue;
      }
      const std::size_t node = f.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[node]);
      if (low[node] != index[node]) continue;
      std::vector<std::size_t> members;
      std::size_t top;
      do {
        top = stack.back();
        stack.pop_back();
        onStack[top] = false;
        members.push_back(top);
      } while (top != node);
      std::sort(members.begin(), members.end());
      components.push_back(std::move(members));
    }
  }
  return components;
}

SparseMatrix principalSubmatrix(const SparseMatrix& m, const std::vector<std::size_t>& members) {
  std::vector<Index> local(m.rows(), std::numeric_limits<Index>::max());
  for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = static_cast<Index>(k);
  std::vector<Triplet> entries;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto row = m.row(members[k]);
    for (std::size_t e = 0; e < row.columns.size(); ++e) {
      const Index j = local[row.columns[e]];
      if (j != std::numeric_limits<Index>::max()) {
        entries.push_back({static_cast<Index>(k), j, row.values[e]});
      }
    }
  }
  return SparseMatrix::fromTriplets(members.size(), members.size(), entries);
}

}  // namespace

double spectralRadius(const SparseMatrix& m) {
  if (!m.square()) throw NonSquare("spectral radius needs a square matrix");
  if (m.rows() == 0 || m.nnz() == 0) return 0.0;
  double radius = 0.0;
  for (const auto& members : stronglyConnectedComponents(m)) {
    if (members.size() == 1) {
      radius = std::max(radius, std::abs(m.at(members[0], members[0])));
      continue;
    }
    const auto block = principalSubmatrix(m, members);
    radius = std::max(radius, block.rows() <= kDenseSpectralCutoff ? denseSpectralRadius(block)
                                                                   : powerGrowthRadius(block));
  }
  return radius;
}

}  // namespace lavanet
