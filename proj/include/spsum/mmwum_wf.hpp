#pragma once

// Width-free matrix multiplicative weights sparsifier. Each round adds one
// term alpha C_j chosen against the normalized weights exp(+-gamma A); the
// trace-exponential potentials grow by at most (1+delta_U) and shrink by at
// least (1-delta_L) per round, giving support ceil(r ln r / eta^2).

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

struct WfParams {
  std::size_t n = 0;
  double eps = 0.0;
  double eta = 0.0;
  double delta_U = 0.0;
  double delta_L = 0.0;
  std::size_t T = 0;
  double gamma = 0.0;
};

inline WfParams wf_params(std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  const double nd = static_cast<double>(n);
  WfParams p;
  p.n = n;
  p.eps = eps;
  p.eta = eps / 2.0;
  p.delta_U = p.eta / nd;
  p.delta_L = p.eta / ((1.0 + p.eta) * nd);
  p.T = static_cast<std::size_t>(std::ceil(nd * std::log(nd) / (p.eta * p.eta)));
  if (p.T == 0) p.T = 1;
  p.gamma = p.eta / nd;
  return p;
}

/// Eigenvalue window guaranteed for A(T)/T by the potential argument:
/// [ln(1/(1-delta_L))/gamma - ln n/(T gamma), ln(1+delta_U)/gamma + ln n/(T gamma)].
inline std::pair<double, double> wf_average_bounds(const WfParams& p) {
  const double slack = std::log(static_cast<double>(p.n)) / (static_cast<double>(p.T) * p.gamma);
  return {-std::log1p(-p.delta_L) / p.gamma - slack, std::log1p(p.delta_U) / p.gamma + slack};
}

struct WfStep {
  std::size_t j = 0;
  double alpha = 0.0;
  double slack = 0.0;  // <X_L,C_j>/delta_L - tr C_j - <X_U,C_j>/delta_U
};

/// Finds j with <X_L,C_j>/delta_L - tr C_j >= <X_U,C_j>/delta_U (largest
/// slack, lowest index on ties) and the alpha for which the upper-potential
/// condition holds with equality.
inline WfStep wf_oracle(const SymMatrix& x_u, const SymMatrix& x_l, const ReducedInstance& reduced,
                        const WfParams& params) {
  if (x_u.dim() != reduced.rank || x_l.dim() != reduced.rank) {
    throw Error(ErrorCode::DimMismatch, "weight matrices do not match the reduced rank");
  }
  for (const SymMatrix* x : {&x_u, &x_l}) {
    if (std::abs(x->trace() - 1.0) > 1e-8) {
      throw Error(ErrorCode::InvalidArgument, "oracle input must have trace one");
    }
    if (!(eigh(*x).min() > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "oracle input must be positive definite");
    }
  }
  WfStep best;
  double best_slack = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    const double tr = reduced.traces[j];
    if (!(tr > 0.0)) continue;
    const SymMatrix& c = reduced.whitened[j];
    const double upper = trace_inner(x_u, c);
    const double lhs = trace_inner(x_l, c) / params.delta_L - tr;
    const double rhs = upper / params.delta_U;
    const double slack = lhs - rhs;
    if (slack >= 0.0 && slack > best_slack) {
      best_slack = slack;
      best.j = j;
      best.slack = slack;
      best.alpha = std::log1p(params.delta_U * tr / upper) / (params.gamma * tr);
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::OracleInfeasible, "no index satisfies the averaging condition");
  return best;
}

/// Psi^u(A) = tr exp(-uI + gamma A)
inline double psi_upper(const SymMatrix& a, double u, double gamma) {
  SymMatrix m = gamma * a;
  m.shift(-u);
  return trace_exp(eigh(m));
}

/// Psi_l(A) = tr exp(lI - gamma A)
inline double psi_lower(const SymMatrix& a, double ell, double gamma) {
  SymMatrix m = -gamma * a;
  m.shift(ell);
  return trace_exp(eigh(m));
}

inline constexpr double kEquivalenceTol = 1e-8;

/// Evaluates the step A -> A + alpha X at round t both as multiplicative
/// potential bounds (Phi_U grows by <= 1+delta_U, Phi_L shrinks by <= 1-delta_L)
/// and as non-increase of the shifted-barrier potentials Psi. The two
/// formulations must agree to kEquivalenceTol relative; returns their
/// shared verdict.
inline bool check_potential_equivalence(const SymMatrix& a, const SymMatrix& x, double alpha, std::size_t t,
                                        const WfParams& params) {
  if (alpha < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  a.check_same_dim(x);
  const double g = params.gamma;
  const SymMatrix next = a + alpha * x;
  const double td = static_cast<double>(t);

  // Multiplicative form, log space.
  const double log_up_now = log_trace_exp(g * a);
  const double log_up_next = log_trace_exp(g * next);
  const double log_lo_now = log_trace_exp(-g * a);
  const double log_lo_next = log_trace_exp(-g * next);
  const double mult_upper = log_up_next - log_up_now - std::log1p(params.delta_U);
  const double mult_lower = log_lo_next - log_lo_now - std::log1p(-params.delta_L);

  // Shifted-barrier form: each Psi is its own trace-exponential.
  const double big_du = std::log1p(params.delta_U);
  const double big_dl = -std::log1p(-params.delta_L);
  auto log_psi_upper = [g](const SymMatrix& m, double u) {
    SymMatrix e = g * m;
    e.shift(-u);
    return log_trace_exp(e);
  };
  auto log_psi_lower = [g](const SymMatrix& m, double ell) {
    SymMatrix e = -g * m;
    e.shift(ell);
    return log_trace_exp(e);
  };
  const double shift_upper = log_psi_upper(next, (td + 1.0) * big_du) - log_psi_upper(a, td * big_du);
  const double shift_lower = log_psi_lower(next, (td + 1.0) * big_dl) - log_psi_lower(a, td * big_dl);

  if (std::abs(mult_upper - shift_upper) > kEquivalenceTol ||
      std::abs(mult_lower - shift_lower) > kEquivalenceTol) {
    throw Error(ErrorCode::EquivalenceBroken,
                "log-ratio mismatch: upper " + std::to_string(mult_upper - shift_upper) + ", lower " +
                    std::to_string(mult_lower - shift_lower));
  }
  const bool mult_holds = mult_upper <= kEquivalenceTol && mult_lower <= kEquivalenceTol;
  const bool shift_holds = shift_upper <= kEquivalenceTol && shift_lower <= kEquivalenceTol;
  if (mult_holds != shift_holds) {
    throw Error(ErrorCode::EquivalenceBroken, "formulations disagree at the tolerance boundary");
  }
  return mult_holds;
}

struct WfIterate {
  std::size_t t = 0;
  std::size_t j = 0;
  double alpha = 0.0;
  double slack = 0.0;
  double log_phi_upper_prev = 0.0, log_phi_upper = 0.0;  // log tr exp(+gamma A)
  double log_phi_lower_prev = 0.0, log_phi_lower = 0.0;  // log tr exp(-gamma A)
  std::optional<bool> equivalence;                        // set when checking is enabled
};

struct WfOptions {
  std::function<void(const WfIterate&)> observer;
  Deadline deadline;
  std::optional<double> gamma;  // defaults to eta / r
  bool check_equivalence = false;
};

inline SparsifierResult wf_sparsify(const ReducedInstance& reduced, double eps, const WfOptions& options = {}) {
  WfParams params = wf_params(reduced.rank, eps);
  if (options.gamma) {
    if (!(*options.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    params.gamma = *options.gamma;
  }
  const double g = params.gamma;
  SymMatrix a(reduced.rank);
  std::vector<double> y(reduced.size(), 0.0);
  Spectrum s = eigh(a);

  for (std::size_t t = 1; t <= params.T; ++t) {
    options.deadline.check("mmwum-wf");
    Spectrum sg = s;
    sg.values *= g;
    if (sg.max() > kMaxExponent || -sg.min() > kMaxExponent) {
      throw Error(ErrorCode::ExpOverflow, "gamma * lambda(A) left the exponent range");
    }
    const SymMatrix x_u = normalized_exp_weight(sg, +1.0);
    const SymMatrix x_l = normalized_exp_weight(sg, -1.0);
    const WfStep step = wf_oracle(x_u, x_l, reduced, params);

    WfIterate it;
    if (options.check_equivalence) {
      it.equivalence = check_potential_equivalence(a, reduced.whitened[step.j], step.alpha, t - 1, params);
    }
    if (options.observer) {
      it.log_phi_upper_prev = log_trace_exp(sg);
      Spectrum neg = sg;
      neg.values = -sg.values.reverse();
      it.log_phi_lower_prev = log_trace_exp(neg);
    }

    a.add_scaled(reduced.whitened[step.j], step.alpha);
    y[step.j] += step.alpha;
    s = eigh(a);

    if (options.observer) {
      it.t = t;
      it.j = step.j;
      it.alpha = step.alpha;
      it.slack = step.slack;
      it.log_phi_upper = log_trace_exp(g * a);
      it.log_phi_lower = log_trace_exp(-g * a);
      options.observer(it);
    }
  }

  // A(T) * (r gamma / (eta T)); equals A(T)/T for the default gamma.
  const double scale =
      static_cast<double>(reduced.rank) * g / (params.eta * static_cast<double>(params.T));
  SparsifierResult result;
  result.y = std::move(y);
  for (double& v : result.y) v *= scale;
  result.certificate = certify(reduced, result.y);
  return result;
}

}  // namespace spsum
