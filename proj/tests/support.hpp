#pragma once

// Generators and independent oracles shared by the unit and acceptance
// tests. Nothing here calls into the algorithms under test.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "spsum/sym_matrix.hpp"

namespace spsum::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// G G^T with G an n x k Gaussian matrix.
inline SymMatrix random_psd(Gen& g, std::size_t n, std::size_t k) {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = g.normal();
  Eigen::MatrixXd b = f * f.transpose();
  return SymMatrix::from_upper(b);
}

/// m members of dimension n with ranks drawn from [1, max_rank].
inline std::vector<SymMatrix> random_collection(Gen& g, std::size_t n, std::size_t m, std::size_t max_rank) {
  std::vector<SymMatrix> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(random_psd(g, n, g.index(1, max_rank)));
  return out;
}

/// e_i e_i^T for i < r.
inline std::vector<SymMatrix> identity_split(std::size_t r) {
  std::vector<SymMatrix> out;
  for (std::size_t i = 0; i < r; ++i) {
    SymMatrix e(r);
    e.set(i, i, 1.0);
    out.push_back(e);
  }
  return out;
}

/// Eigenvalues of [[a, b], [b, c]] from the characteristic polynomial, ascending.
inline std::array<double, 2> eig2(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {mean - rad, mean + rad};
}

/// x^T M x by plain loops.
inline double quad(const SymMatrix& m, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += x[i] * m(i, j) * x[j];
  return s;
}

/// Entrywise sum of weighted matrices, computed by plain loops.
inline std::vector<std::vector<double>> dense_sum(const std::vector<SymMatrix>& mats, const std::vector<double>& y) {
  const std::size_t n = mats.front().dim();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < mats.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += y[k] * mats[k](i, j);
  return out;
}

/// Largest |a_ij - b_ij|.
inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

namespace jacobi_detail {

inline void jacobi(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v) {
  const std::size_t n = a.size();
  v.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  double scale = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) scale += a[p][q] * a[p][q];
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off <= 1e-32 * scale) return;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

inline std::vector<std::vector<double>> to_rows(const SymMatrix& m) {
  std::vector<std::vector<double>> a(m.dim(), std::vector<double>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) a[i][j] = m(i, j);
  return a;
}

}  // namespace jacobi_detail

/// Eigenvalues by cyclic Jacobi, unsorted.
inline std::vector<double> jacobi_eigenvalues(const SymMatrix& m) {
  auto a = jacobi_detail::to_rows(m);
  std::vector<std::vector<double>> v;
  jacobi_detail::jacobi(a, v);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i][i];
  return out;
}

/// Extreme generalized eigenvalues of (M, B) on range(B): diagonalize B by
/// Jacobi sweeps, whiten, diagonalize again. Independent of the Eigen path.
inline std::array<double, 2> generalized_extremes(const SymMatrix& m, const SymMatrix& b, double rel_cut = 1e-9) {
  auto a = jacobi_detail::to_rows(b);
  std::vector<std::vector<double>> v;
  jacobi_detail::jacobi(a, v);
  const std::size_t n = a.size();
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, a[i][i]);
  // W = V_kept diag(1/sqrt(lambda))
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (a[i][i] > rel_cut * top) keep.push_back(i);
  const std::size_t r = keep.size();
  std::vector<std::vector<double>> c(r, std::vector<double>(r, 0.0));
  for (std::size_t p = 0; p < r; ++p) {
    for (std::size_t q = 0; q < r; ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += v[i][keep[p]] * m(i, j) * v[j][keep[q]];
      c[p][q] = s / std::sqrt(a[keep[p]][keep[p]] * a[keep[q]][keep[q]]);
    }
  }
  for (std::size_t p = 0; p < r; ++p)
    for (std::size_t q = p + 1; q < r; ++q) c[p][q] = c[q][p] = 0.5 * (c[p][q] + c[q][p]);
  std::vector<std::vector<double>> w;
  jacobi_detail::jacobi(c, w);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < r; ++i) {
    lo = std::min(lo, c[i][i]);
    hi = std::max(hi, c[i][i]);
  }
  return {lo, hi};
}

}  // namespace spsum::testing
