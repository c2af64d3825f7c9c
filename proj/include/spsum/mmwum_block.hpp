#pragma once

// Block matrix multiplicative weights sparsifier with an explicit width
// bound rho. Two blocks track the lower (sum y_i C_i >= I) and upper
// (sum y_i C_i <= I) constraints; each round the oracle returns a single
// scaled term alpha C_j. Support is O(r ln r / eps^3).
//
// Also provides the rank-one fixture showing that any oracle of this form
// needs width rho = Omega(n / eta).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spsum/collection.hpp"
#include "spsum/control.hpp"
#include "spsum/error.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

struct BlockParams {
  std::size_t n = 0;
  double eps = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double ell = 1.0;
  double rho = 0.0;
  std::size_t T = 0;

  /// beta ell + (rho + ell) ln n / (T beta) + (1 + beta) eta
  double error_bound() const {
    return beta * ell + (rho + ell) * std::log(static_cast<double>(n)) / (static_cast<double>(T) * beta) +
           (1.0 + beta) * eta;
  }
};

inline BlockParams block_params(std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  const double nd = static_cast<double>(n);
  BlockParams p;
  p.n = n;
  p.eps = eps;
  p.beta = eps / 4.0;
  p.eta = eps / 8.0;
  p.ell = 1.0;
  p.rho = (1.0 + p.eta) * nd / p.eta;
  p.T = static_cast<std::size_t>(std::ceil(2.0 * (p.rho + p.ell) * std::log(nd) / (p.beta * eps)));
  if (p.T == 0) p.T = 1;
  return p;
}

struct BlockStep {
  std::size_t j = 0;
  double alpha = 0.0;
  double width = 0.0;  // alpha * tr C_j
};

/// With p_i = <X1,C_i>/tr X1, returns the feasible j of least width
/// tr C_j / p_j among those with <X2,C_j>/p_j <= (1+eta) tr X2 and
/// tr C_j / p_j <= rho = (1+eta) r / eta; alpha = 1/p_j.
inline BlockStep block_oracle(const SymMatrix& x1, const SymMatrix& x2, const ReducedInstance& reduced,
                              double eta) {
  if (x1.dim() != reduced.rank || x2.dim() != reduced.rank) {
    throw Error(ErrorCode::DimMismatch, "weight matrices do not match the reduced rank");
  }
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  if (!(eigh(x1).min() > 0.0) || !(eigh(x2).min() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "oracle inputs must be positive definite");
  }
  const double rho = (1.0 + eta) * static_cast<double>(reduced.rank) / eta;
  const double tr1 = x1.trace();
  const double tr2 = x2.trace();

  BlockStep best;
  double best_width = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    if (!(reduced.traces[j] > 0.0)) continue;
    const SymMatrix& c = reduced.whitened[j];
    const double p = trace_inner(x1, c) / tr1;
    if (!(p > 0.0)) continue;
    const double width = reduced.traces[j] / p;
    if (trace_inner(x2, c) / p <= (1.0 + eta) * tr2 && width <= rho && width < best_width) {
      best_width = width;
      best.j = j;
      best.alpha = 1.0 / p;
      best.width = width;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::OracleInfeasible, "no index passes both Markov conditions");
  return best;
}

struct BlockIterate {
  std::size_t t = 0;
  std::size_t j = 0;
  double alpha = 0.0;
  double width = 0.0;
  // Spectrum of the block-1 response alpha C_j - I; must lie in [-ell, rho].
  double response_min = 0.0;
  double response_max = 0.0;
};

struct BlockOptions {
  std::function<void(const BlockIterate&)> observer;
  Deadline deadline;
};

namespace detail {

/// One constraint block k of the generic method: A_{i,k} = sign C_i,
/// C_k = sign I, with the running exponent sum
/// S_k = sum_tau [sum_i y_i A_{i,k} - C_k + ell_k^{(tau)} I].
struct ConstraintBlock {
  double sign = 1.0;
  double ell_round = 0.0;  // ell_k^{(t)}: +ell on positive rounds, -ell on negative ones
  SymMatrix exponent_sum;
};

}  // namespace detail

inline SparsifierResult block_sparsify(const ReducedInstance& reduced, double eps, const BlockOptions& options = {}) {
  const BlockParams params = block_params(reduced.rank, eps);
  const std::size_t r = reduced.rank;
  const double rate = params.beta / (params.ell + params.rho);

  // Block 1 (lower constraint) has every round positive, block 2 every round negative.
  std::array<detail::ConstraintBlock, 2> blocks{
      detail::ConstraintBlock{+1.0, +params.ell, SymMatrix(r)},
      detail::ConstraintBlock{-1.0, -params.ell, SymMatrix(r)},
  };

  std::vector<double> y_sum(reduced.size(), 0.0);
  for (std::size_t t = 1; t <= params.T; ++t) {
    options.deadline.check("mmwum-block");
    std::array<SymMatrix, 2> weights;
    for (std::size_t k = 0; k < 2; ++k) {
      Spectrum s = eigh(blocks[k].exponent_sum);
      s.values *= -rate;
      if (s.max() > kMaxExponent && s.max() - s.min() > kMaxExponent) {
        throw Error(ErrorCode::ExpOverflow, "block weight exponent out of range");
      }
      weights[k] = normalized_exp_weight(s, +1.0);
    }
    const BlockStep step = block_oracle(weights[0], weights[1], reduced, params.eta);
    const SymMatrix& c = reduced.whitened[step.j];
    y_sum[step.j] += step.alpha;

    for (auto& b : blocks) {
      // sign * alpha C_j - sign * I + ell_k I
      b.exponent_sum.add_scaled(c, b.sign * step.alpha);
      b.exponent_sum.shift(-b.sign + b.ell_round);
    }

    if (options.observer) {
      SymMatrix response = step.alpha * c;
      response.shift(-1.0);
      const Spectrum rs = eigh(response);
      options.observer(BlockIterate{t, step.j, step.alpha, step.width, rs.min(), rs.max()});
    }
  }

  SparsifierResult result;
  result.y = std::move(y_sum);
  for (double& v : result.y) v /= static_cast<double>(params.T);
  result.certificate = certify(reduced, result.y);
  return result;
}

/// Rank-one instance on n = 3k dimensions with weights
/// X1 = Diag(1, zeta^3, zeta) (x) I_k and X2 = Diag(1, zeta^-3, zeta^-1) (x) I_k,
/// zeta = 3 eta. Members are ordered type-major: index (i-1) k + (j-1)
/// holds B_{i,j} = v_{i,j} v_{i,j}^T.
struct WidthFixture {
  std::size_t k = 0;
  double eta = 0.0;
  std::vector<SymMatrix> matrices;
  SymMatrix x1;
  SymMatrix x2;
  double lower_bound = 0.0;  // (1 - eta) n / (9 eta)

  std::size_t type_of(std::size_t index) const { return index / k + 1; }
};

inline WidthFixture oracle_width_fixture(std::size_t k, double eta) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (!(eta > 0.0) || !((1.0 + eta) / (1.0 - eta) < 1.0 + 3.0 * eta)) {
    throw Error(ErrorCode::InvalidArgument, "eta too large: need (1+eta)/(1-eta) < 1+3eta");
  }
  const std::size_t n = 3 * k;
  const double zeta = 3.0 * eta;
  const std::array<double, 3> d1{1.0, zeta * zeta * zeta, zeta};
  const std::array<double, 3> d2{1.0, 1.0 / (zeta * zeta * zeta), 1.0 / zeta};
  const double h = 1.0 / std::sqrt(2.0);
  const std::array<std::array<double, 3>, 3> types{{{h, -h, 0.0}, {h, h, 0.0}, {0.0, 0.0, 1.0}}};

  WidthFixture f;
  f.k = k;
  f.eta = eta;
  f.x1 = SymMatrix(n);
  f.x2 = SymMatrix(n);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      f.x1.set(a * k + j, a * k + j, d1[a]);
      f.x2.set(a * k + j, a * k + j, d2[a]);
    }
  }
  for (const auto& u : types) {
    for (std::size_t j = 0; j < k; ++j) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t a = 0; a < 3; ++a) v(static_cast<Eigen::Index>(a * k + j)) = u[a];
      f.matrices.push_back(SymMatrix::outer(v));
    }
  }
  f.lower_bound = (1.0 - eta) * static_cast<double>(n) / (9.0 * eta);
  return f;
}

/// The alpha interval on which (j, alpha) satisfies
///   alpha <X1,B> >= (1-eta) tr X1,  alpha <X2,B> <= (1+eta) tr X2,  alpha tr B <= rho.
/// Empty when the constraints are incompatible.
inline std::optional<std::pair<double, double>> oracle_alpha_interval(const SymMatrix& b, const SymMatrix& x1,
                                                                      const SymMatrix& x2, double eta,
                                                                      double rho) {
  const double a1 = trace_inner(x1, b);
  const double a2 = trace_inner(x2, b);
  const double tr_b = b.trace();
  if (!(a1 > 0.0)) return std::nullopt;
  const double lo = (1.0 - eta) * x1.trace() / a1;
  double hi = std::numeric_limits<double>::infinity();
  if (a2 > 0.0) hi = std::min(hi, (1.0 + eta) * x2.trace() / a2);
  if (tr_b > 0.0) hi = std::min(hi, rho / tr_b);
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace spsum
