#pragma once

// Dense real symmetric matrices and the spectral primitives every
// sparsifier builds on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spsum/error.hpp"

namespace spsum {

/// Dense real symmetric n x n matrix.
///
/// Storage is a full Eigen matrix kept exactly symmetric: every mutation
/// writes both (i,j) and (j,i), and construction from an arbitrary dense
/// matrix mirrors its upper triangle. Readers may therefore use either
/// triangle.
class SymMatrix {
 public:
  SymMatrix() : SymMatrix(1) {}

  explicit SymMatrix(std::size_t n) : data_(Eigen::MatrixXd::Zero(check_dim(n), n)) {}

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    m.data_.setIdentity();
    return m;
  }

  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.data_(i, i) = d[i];
    return m;
  }

  static SymMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  /// Mirrors the upper triangle of `a`; the lower triangle is ignored.
  static SymMatrix from_upper(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) {
      throw Error(ErrorCode::DimMismatch, "matrix is not square");
    }
    SymMatrix m(static_cast<std::size_t>(a.rows()));
    m.data_ = a.triangularView<Eigen::Upper>();
    m.data_.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
    return m;
  }

  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd a(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw Error(ErrorCode::DimMismatch, "ragged row list");
      }
      Eigen::Index j = 0;
      for (double v : row) a(i, j++) = v;
      ++i;
    }
    return from_upper(a);
  }

  /// scale * v v^T
  static SymMatrix outer(const Eigen::VectorXd& v, double scale = 1.0) {
    SymMatrix m(static_cast<std::size_t>(v.size()));
    m.data_.noalias() = scale * v * v.transpose();
    m.data_.triangularView<Eigen::StrictlyLower>() = m.data_.transpose().triangularView<Eigen::StrictlyLower>();
    return m;
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }

  double operator()(std::size_t i, std::size_t j) const { return data_(i, j); }

  void set(std::size_t i, std::size_t j, double v) {
    data_(i, j) = v;
    data_(j, i) = v;
  }

  void add_to(std::size_t i, std::size_t j, double v) {
    data_(i, j) += v;
    if (i != j) data_(j, i) += v;
  }

  const Eigen::MatrixXd& dense() const noexcept { return data_; }

  double trace() const { return data_.trace(); }
  double frobenius_norm() const { return data_.norm(); }
  bool all_finite() const { return data_.allFinite(); }
  bool is_zero() const { return (data_.array() == 0.0).all(); }

  /// this += scale * other
  SymMatrix& add_scaled(const SymMatrix& other, double scale) {
    check_same_dim(other);
    data_ += scale * other.data_;
    return *this;
  }

  SymMatrix& operator+=(const SymMatrix& other) { return add_scaled(other, 1.0); }
  SymMatrix& operator-=(const SymMatrix& other) { return add_scaled(other, -1.0); }
  SymMatrix& operator*=(double s) {
    data_ *= s;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  /// Adds c * I.
  SymMatrix& shift(double c) {
    data_.diagonal().array() += c;
    return *this;
  }

  /// Congruence P^T M P for an n x r matrix P.
  SymMatrix congruence(const Eigen::MatrixXd& p) const {
    if (p.rows() != data_.rows()) {
      throw Error(ErrorCode::DimMismatch, "congruence basis has wrong row count");
    }
    Eigen::MatrixXd out = p.transpose() * data_ * p;
    return from_upper(out);
  }

  void check_same_dim(const SymMatrix& other) const {
    if (other.dim() != dim()) {
      throw Error(ErrorCode::DimMismatch,
                  "dimension " + std::to_string(dim()) + " vs " + std::to_string(other.dim()));
    }
  }

 private:
  static Eigen::Index check_dim(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidMatrix, "dimension must be at least 1");
    return static_cast<Eigen::Index>(n);
  }

  Eigen::MatrixXd data_;
};

/// Block-diagonal a (+) b.
inline SymMatrix direct_sum(const SymMatrix& a, const SymMatrix& b) {
  const auto na = static_cast<Eigen::Index>(a.dim());
  const auto nb = static_cast<Eigen::Index>(b.dim());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(na + nb, na + nb);
  out.topLeftCorner(na, na) = a.dense();
  out.bottomRightCorner(nb, nb) = b.dense();
  return SymMatrix::from_upper(out);
}

/// <X, Y> = trace(XY), summed over the upper triangle in row-major order
/// (off-diagonal terms doubled). The traversal order is fixed, so the
/// result is exactly symmetric in its arguments.
inline double trace_inner(const SymMatrix& x, const SymMatrix& y) {
  x.check_same_dim(y);
  const auto& a = x.dense();
  const auto& b = y.dense();
  const auto n = a.rows();
  double diag = 0.0;
  double off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diag += a(i, i) * b(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * b(i, j);
  }
  return diag + 2.0 * off;
}

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns

  double min() const { return values(0); }
  double max() const { return values(values.size() - 1); }
  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }
};

inline Spectrum eigh(const SymMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorCode::InvalidMatrix, "non-finite entry");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.dense(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidMatrix, "eigendecomposition did not converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

/// Q f(Lambda) Q^T for a scalar function f applied to each eigenvalue.
template <typename F>
SymMatrix spectral_map(const Spectrum& s, F&& f) {
  Eigen::VectorXd d(s.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(s.values(i));
  Eigen::MatrixXd out = s.vectors * d.asDiagonal() * s.vectors.transpose();
  return SymMatrix::from_upper(out);
}

/// max |lambda|
inline double spectral_radius(const Spectrum& s) {
  return std::max(std::abs(s.min()), std::abs(s.max()));
}

inline bool is_psd(const Spectrum& s, double tol) {
  return s.min() >= -tol * std::max(1.0, spectral_radius(s));
}

/// True iff lambda_min(M) >= -tol * max(1, lambda_max(|M|)).
inline bool is_psd(const SymMatrix& m, double tol) {
  if (tol < 0) throw Error(ErrorCode::InvalidArgument, "negative tolerance");
  return is_psd(eigh(m), tol);
}

struct PinvSqrt {
  SymMatrix matrix;
  std::size_t rank = 0;
};

/// (M^+)^{1/2}: eigenvalues at or below rank_tol * lambda_max count as zero.
inline PinvSqrt pinv_sqrt(const SymMatrix& m, double rank_tol) {
  const Spectrum s = eigh(m);
  if (!is_psd(s, rank_tol)) {
    throw Error(ErrorCode::NotPsd, "lambda_min = " + std::to_string(s.min()));
  }
  const double cutoff = rank_tol * std::max(s.max(), 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) > cutoff) ++rank;
  }
  return PinvSqrt{spectral_map(s, [cutoff](double l) { return l > cutoff ? 1.0 / std::sqrt(l) : 0.0; }),
                  rank};
}

inline constexpr double kMaxExponent = 700.0;

inline void check_exponent(const Spectrum& s) {
  if (s.max() > kMaxExponent) {
    throw Error(ErrorCode::ExpOverflow, "exponent eigenvalue " + std::to_string(s.max()));
  }
}

inline SymMatrix sym_exp(const SymMatrix& m) {
  const Spectrum s = eigh(m);
  check_exponent(s);
  return spectral_map(s, [](double l) { return std::exp(l); });
}

inline double trace_exp(const Spectrum& s) {
  check_exponent(s);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) sum += std::exp(s.values(i));
  return sum;
}

/// log trace exp(M), evaluated without overflow.
inline double log_trace_exp(const Spectrum& s) {
  const double top = s.max();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) sum += std::exp(s.values(i) - top);
  return top + std::log(sum);
}

inline double log_trace_exp(const SymMatrix& m) { return log_trace_exp(eigh(m)); }

/// exp(sign * M) / tr exp(sign * M) from the spectrum of M, shifted so
/// the largest exponent is zero.
inline SymMatrix normalized_exp_weight(const Spectrum& s, double sign) {
  const double top = sign > 0 ? s.max() : -s.min();
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) total += std::exp(sign * s.values(i) - top);
  return spectral_map(s, [&](double l) { return std::exp(sign * l - top) / total; });
}

}  // namespace spsum
