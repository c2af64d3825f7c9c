#pragma once

// PSD collections, the reduction to the isotropic case sum_i C_i = I, and
// the spectral certificate that every sparsifier output is checked against.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spsum/error.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

inline constexpr double kDefaultPsdTol = 1e-9;

/// Relative rank cutoff, scaled with the dimension.
inline double default_rank_tol(std::size_t n) { return 1e-10 * static_cast<double>(n); }

/// An ordered list of PSD matrices B_1..B_m of a common dimension n.
///
/// When built from factors, B_i = V_i V_i^T and the factor list is kept so
/// callers can recover the low-rank form; the core algorithms only use the
/// dense matrices.
class PsdCollection {
 public:
  PsdCollection(std::size_t n, std::vector<SymMatrix> matrices, double psd_tol = kDefaultPsdTol)
      : dim_(n), matrices_(std::move(matrices)) {
    for (std::size_t i = 0; i < matrices_.size(); ++i) {
      if (matrices_[i].dim() != dim_) {
        throw Error(ErrorCode::DimMismatch, "member " + std::to_string(i) + " has dimension " +
                                                std::to_string(matrices_[i].dim()));
      }
      const Spectrum s = eigh(matrices_[i]);
      if (!is_psd(s, psd_tol)) {
        throw Error(ErrorCode::NotPsd,
                    "member " + std::to_string(i) + " has lambda_min " + std::to_string(s.min()));
      }
    }
  }

  explicit PsdCollection(std::vector<SymMatrix> matrices, double psd_tol = kDefaultPsdTol)
      : PsdCollection(matrices.empty() ? 1 : matrices.front().dim(), std::move(matrices), psd_tol) {}

  /// B_i = V_i V_i^T; each V_i is n x k_i.
  static PsdCollection from_factors(std::size_t n, std::vector<Eigen::MatrixXd> factors) {
    std::vector<SymMatrix> mats;
    mats.reserve(factors.size());
    for (const auto& v : factors) {
      if (static_cast<std::size_t>(v.rows()) != n) {
        throw Error(ErrorCode::DimMismatch, "factor row count differs from n");
      }
      Eigen::MatrixXd b = v * v.transpose();
      mats.push_back(SymMatrix::from_upper(b));
    }
    PsdCollection out(n, std::move(mats), std::numeric_limits<double>::infinity());
    out.factors_ = std::move(factors);
    return out;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return matrices_.size(); }
  const SymMatrix& operator[](std::size_t i) const { return matrices_.at(i); }
  const std::vector<SymMatrix>& matrices() const noexcept { return matrices_; }
  const std::optional<std::vector<Eigen::MatrixXd>>& factors() const noexcept { return factors_; }

  SymMatrix sum() const {
    SymMatrix b(dim_);
    for (const auto& m : matrices_) b += m;
    return b;
  }

  SymMatrix weighted_sum(std::span<const double> y) const {
    if (y.size() != matrices_.size()) {
      throw Error(ErrorCode::DimMismatch, "weight vector length differs from collection size");
    }
    SymMatrix b(dim_);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] != 0.0) b.add_scaled(matrices_[i], y[i]);
    }
    return b;
  }

 private:
  std::size_t dim_;
  std::vector<SymMatrix> matrices_;
  std::optional<std::vector<Eigen::MatrixXd>> factors_;
};

/// The collection whitened against B = sum_i B_i on range(B):
/// C_i = W^T B_i W with W = P Lambda^{-1/2}, so that sum_i C_i = I_r.
struct ReducedInstance {
  std::size_t original_dim = 0;
  std::size_t rank = 0;
  std::vector<SymMatrix> whitened;
  std::vector<double> traces;
  Eigen::MatrixXd basis;     // n x r, orthonormal columns spanning range(B)
  Eigen::MatrixXd whitener;  // n x r, basis * Lambda^{-1/2}

  std::size_t size() const noexcept { return whitened.size(); }

  SymMatrix combination(std::span<const double> y) const {
    if (y.size() != whitened.size()) {
      throw Error(ErrorCode::DimMismatch, "weight vector length differs from collection size");
    }
    SymMatrix a(rank);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] != 0.0) a.add_scaled(whitened[i], y[i]);
    }
    return a;
  }
};

/// Wraps matrices that already sum to the identity (checked) without any
/// change of basis.
inline ReducedInstance make_isotropic(std::vector<SymMatrix> c, double tol = 1e-8) {
  if (c.empty()) throw Error(ErrorCode::EmptyProblem, "no matrices");
  const std::size_t r = c.front().dim();
  SymMatrix total(r);
  for (const auto& m : c) total += m;
  total.shift(-1.0);
  if (total.frobenius_norm() > tol * static_cast<double>(r)) {
    throw Error(ErrorCode::InvalidArgument, "matrices do not sum to the identity");
  }
  ReducedInstance out;
  out.original_dim = r;
  out.rank = r;
  out.traces.reserve(c.size());
  for (const auto& m : c) out.traces.push_back(m.trace());
  out.whitened = std::move(c);
  out.basis = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  out.whitener = out.basis;
  return out;
}

inline ReducedInstance reduce_to_identity(const PsdCollection& coll, double rank_tol) {
  if (coll.size() == 0) throw Error(ErrorCode::EmptyProblem, "no matrices");
  const SymMatrix b = coll.sum();
  const Spectrum s = eigh(b);
  if (!(s.max() > 0.0)) throw Error(ErrorCode::EmptyProblem, "sum of the collection is zero");
  const double cutoff = rank_tol * s.max();

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) > cutoff) keep.push_back(i);
  }
  const auto n = static_cast<Eigen::Index>(coll.dim());
  const auto r = static_cast<Eigen::Index>(keep.size());

  ReducedInstance out;
  out.original_dim = coll.dim();
  out.rank = keep.size();
  out.basis.resize(n, r);
  out.whitener.resize(n, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    out.basis.col(k) = s.vectors.col(keep[static_cast<std::size_t>(k)]);
    out.whitener.col(k) = out.basis.col(k) / std::sqrt(s.values(keep[static_cast<std::size_t>(k)]));
  }

  // Every B_i must live inside range(B); true for PSD members up to rounding.
  const Eigen::MatrixXd proj_out =
      Eigen::MatrixXd::Identity(n, n) - out.basis * out.basis.transpose();
  const double range_tol = 1e-8 * std::max(1.0, b.frobenius_norm());

  out.whitened.reserve(coll.size());
  out.traces.reserve(coll.size());
  for (std::size_t i = 0; i < coll.size(); ++i) {
    const Eigen::MatrixXd& bi = coll[i].dense();
    if (r < n) {
      const double leak = (proj_out * bi * proj_out).norm();
      if (leak > range_tol) {
        throw Error(ErrorCode::NotPsd, "member " + std::to_string(i) +
                                           " leaves range of the sum by " + std::to_string(leak));
      }
    }
    SymMatrix ci = coll[i].congruence(out.whitener);
    out.traces.push_back(ci.trace());
    out.whitened.push_back(std::move(ci));
  }
  return out;
}

inline ReducedInstance reduce_to_identity(const PsdCollection& coll) {
  return reduce_to_identity(coll, default_rank_tol(coll.dim()));
}

/// Extreme eigenvalues of sum_i y_i C_i on the whitened range space.
struct SandwichCertificate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t support_size = 0;
  double epsilon_achieved = std::numeric_limits<double>::infinity();
  bool passed = false;  // set by verify_sandwich for its requested eps

  /// B <= sum y_i B_i <= (1+eps) B, both sides relaxed by tol.
  bool passes(double eps, double tol) const {
    return lambda_min >= 1.0 - tol && lambda_max <= (1.0 + eps) * (1.0 + tol);
  }

  /// (1-eps) B <= sum y_i B_i <= (1+eps) B, both sides relaxed by tol.
  bool within_window(double eps, double tol) const {
    return lambda_min >= 1.0 - eps - tol && lambda_max <= 1.0 + eps + tol;
  }

  double ratio() const { return lambda_max / lambda_min; }
};

inline std::size_t count_support(std::span<const double> y) {
  std::size_t k = 0;
  for (double v : y) k += v > 0.0 ? 1 : 0;
  return k;
}

inline SandwichCertificate certify(const ReducedInstance& reduced, std::span<const double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0 || std::isnan(y[i])) {
      throw Error(ErrorCode::NegativeWeight, "y[" + std::to_string(i) + "] = " + std::to_string(y[i]));
    }
  }
  const Spectrum s = eigh(reduced.combination(y));
  SandwichCertificate cert;
  cert.lambda_min = s.min();
  cert.lambda_max = s.max();
  cert.support_size = count_support(y);
  cert.epsilon_achieved = cert.lambda_min > 0.0 ? cert.lambda_max / cert.lambda_min - 1.0
                                                : std::numeric_limits<double>::infinity();
  return cert;
}

inline SandwichCertificate verify_sandwich(const PsdCollection& coll, std::span<const double> y,
                                           double eps, double tol) {
  if (y.size() != coll.size()) {
    throw Error(ErrorCode::DimMismatch, "weight vector length differs from collection size");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) {
      throw Error(ErrorCode::NegativeWeight, "y[" + std::to_string(i) + "] = " + std::to_string(y[i]));
    }
  }
  SandwichCertificate cert = certify(reduce_to_identity(coll), y);
  cert.passed = cert.passes(eps, tol);
  return cert;
}

struct SparsifierResult {
  std::vector<double> y;
  SandwichCertificate certificate;

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] > 0.0) idx.push_back(i);
    }
    return idx;
  }
};

}  // namespace spsum
