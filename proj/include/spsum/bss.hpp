#pragma once

// Deterministic barrier-potential sparsifier for sums of PSD matrices of
// arbitrary rank. Support is at most ceil(4r/eps^2) and the output
// satisfies I <= sum y_i C_i <= ((2+eps)/(2-eps))^2 I.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spsum/collection.hpp"
#include "spsum/control.hpp"
#include "spsum/error.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

struct BssParams {
  std::size_t n = 0;
  double eps = 0.0;
  double delta_L = 1.0;
  double eps_L = 0.0;
  double ell_0 = 0.0;
  double delta_U = 0.0;
  double eps_U = 0.0;
  double u_0 = 0.0;
  std::size_t T = 0;

  /// ((2+eps)/(2-eps))^2, the guaranteed lambda_max / lambda_min.
  double ratio_bound() const { return delta_U * delta_U; }
};

inline BssParams bss_params(std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  BssParams p;
  const double nd = static_cast<double>(n);
  p.n = n;
  p.eps = eps;
  p.delta_L = 1.0;
  p.eps_L = eps / 2.0;
  p.ell_0 = -nd / p.eps_L;
  p.delta_U = (2.0 + eps) / (2.0 - eps);
  p.eps_U = eps / (2.0 * p.delta_U);
  p.u_0 = nd / p.eps_U;
  p.T = static_cast<std::size_t>(std::ceil(4.0 * nd / (eps * eps)));
  if (p.T == 0) p.T = 1;
  return p;
}

// Upper potential Phi^u(A) = tr (uI - A)^{-1}.
inline double phi_upper(const Spectrum& s, double u) {
  if (!(s.max() < u)) {
    throw Error(ErrorCode::BarrierViolated,
                "lambda_max " + std::to_string(s.max()) + " >= u " + std::to_string(u));
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) sum += 1.0 / (u - s.values(i));
  return sum;
}

inline double phi_upper(const SymMatrix& a, double u) { return phi_upper(eigh(a), u); }

// Lower potential Phi_l(A) = tr (A - lI)^{-1}.
inline double phi_lower(const Spectrum& s, double ell) {
  if (!(s.min() > ell)) {
    throw Error(ErrorCode::BarrierViolated,
                "lambda_min " + std::to_string(s.min()) + " <= ell " + std::to_string(ell));
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) sum += 1.0 / (s.values(i) - ell);
  return sum;
}

inline double phi_lower(const SymMatrix& a, double ell) { return phi_lower(eigh(a), ell); }

namespace detail {

/// Everything U_A and L_A need from one eigendecomposition of A.
struct BarrierFrame {
  SymMatrix m_inv;   // (u'I - A)^{-1}
  SymMatrix m_inv2;  // (u'I - A)^{-2}
  SymMatrix n_inv;   // (A - l'I)^{-1}
  SymMatrix n_inv2;  // (A - l'I)^{-2}
  double upper_gap = 0.0;  // Phi^u(A) - Phi^{u'}(A)
  double lower_gap = 0.0;  // Phi_{l'}(A) - Phi_l(A)
  double phi_upper = 0.0;
  double phi_lower = 0.0;
};

inline BarrierFrame upper_frame(const Spectrum& s, double u, double delta_u) {
  const double u_next = u + delta_u;
  BarrierFrame f;
  f.phi_upper = phi_upper(s, u);
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double l = s.values(i);
    f.upper_gap += delta_u / ((u - l) * (u_next - l));
  }
  f.m_inv = spectral_map(s, [&](double l) { return 1.0 / (u_next - l); });
  f.m_inv2 = spectral_map(s, [&](double l) { return 1.0 / ((u_next - l) * (u_next - l)); });
  return f;
}

inline void add_lower_frame(BarrierFrame& f, const Spectrum& s, double ell, double delta_l) {
  const double ell_next = ell + delta_l;
  f.phi_lower = phi_lower(s, ell);
  if (f.phi_lower > 1.0 / delta_l) {
    throw Error(ErrorCode::PotentialTooLarge,
                "Phi_l(A) = " + std::to_string(f.phi_lower) + " exceeds 1/delta_L");
  }
  if (!(s.min() > ell_next)) {
    throw Error(ErrorCode::BarrierViolated, "shifted lower barrier reaches lambda_min");
  }
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double l = s.values(i);
    f.lower_gap += delta_l / ((l - ell) * (l - ell_next));
  }
  f.n_inv = spectral_map(s, [&](double l) { return 1.0 / (l - ell_next); });
  f.n_inv2 = spectral_map(s, [&](double l) { return 1.0 / ((l - ell_next) * (l - ell_next)); });
}

inline double upper_bound_at(const BarrierFrame& f, const SymMatrix& x) {
  return trace_inner(f.m_inv2, x) / f.upper_gap + trace_inner(f.m_inv, x);
}

inline double lower_bound_at(const BarrierFrame& f, const SymMatrix& x) {
  return trace_inner(f.n_inv2, x) / f.lower_gap - trace_inner(f.n_inv, x);
}

}  // namespace detail

/// U_A(X): any alpha with 1/alpha >= U_A(X) keeps lambda_max(A + alpha X)
/// below u + delta_U without raising the upper potential.
inline double upper_shift_bound(const SymMatrix& a, const SymMatrix& x, double u, double delta_u) {
  a.check_same_dim(x);
  if (x.is_zero()) throw Error(ErrorCode::ZeroDirection, "X = 0");
  const detail::BarrierFrame f = detail::upper_frame(eigh(a), u, delta_u);
  return detail::upper_bound_at(f, x);
}

/// L_A(X): any alpha with 0 < 1/alpha <= L_A(X) keeps lambda_min(A + alpha X)
/// above ell + delta_L without raising the lower potential.
inline double lower_shift_bound(const SymMatrix& a, const SymMatrix& x, double ell, double delta_l) {
  a.check_same_dim(x);
  detail::BarrierFrame f;
  detail::add_lower_frame(f, eigh(a), ell, delta_l);
  return detail::lower_bound_at(f, x);
}

struct BssState {
  SymMatrix a;
  std::vector<double> y;
  std::size_t t = 0;
  double u = 0.0;
  double ell = 0.0;
};

inline BssState bss_initial_state(const ReducedInstance& reduced, const BssParams& params) {
  return BssState{SymMatrix(reduced.rank), std::vector<double>(reduced.size(), 0.0), 0, params.u_0,
                  params.ell_0};
}

struct BssStep {
  std::size_t j = 0;
  double alpha = 0.0;
  double upper = 0.0;      // U_A(C_j)
  double lower = 0.0;      // L_A(C_j)
  double sum_upper = 0.0;  // sum_j U_A(C_j)
  double sum_lower = 0.0;  // sum_j L_A(C_j)
  double phi_upper = 0.0;  // Phi^{u}(A) before the step
  double phi_lower = 0.0;  // Phi_{l}(A) before the step
};

namespace detail {

inline BssStep bss_step_from(const Spectrum& s, const BssState& state, const ReducedInstance& reduced,
                             const BssParams& params) {
  BarrierFrame f = upper_frame(s, state.u, params.delta_U);
  add_lower_frame(f, s, state.ell, params.delta_L);

  BssStep best;
  best.phi_upper = f.phi_upper;
  best.phi_lower = f.phi_lower;
  double best_gap = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    if (!(reduced.traces[j] > 0.0)) continue;
    const SymMatrix& c = reduced.whitened[j];
    const double up = upper_bound_at(f, c);
    const double lo = lower_bound_at(f, c);
    best.sum_upper += up;
    best.sum_lower += lo;
    if (up > 0.0 && lo >= up && lo - up > best_gap) {
      best_gap = lo - up;
      best.j = j;
      best.upper = up;
      best.lower = lo;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::StepNotFound,
                "iteration " + std::to_string(state.t + 1) + ": sum L = " + std::to_string(best.sum_lower) +
                    ", sum U = " + std::to_string(best.sum_upper));
  }
  best.alpha = 2.0 / (best.upper + best.lower);
  return best;
}

}  // namespace detail

/// Picks the candidate with the widest admissible interval U <= 1/alpha <= L
/// and alpha at the midpoint of that interval in reciprocal space.
inline BssStep bss_step(const BssState& state, const ReducedInstance& reduced, const BssParams& params) {
  return detail::bss_step_from(eigh(state.a), state, reduced, params);
}

/// Per-iteration trace handed to BssOptions::observer.
struct BssIterate {
  std::size_t t = 0;
  std::size_t j = 0;
  double alpha = 0.0;
  double u_prev = 0.0, u = 0.0;
  double ell_prev = 0.0, ell = 0.0;
  double phi_upper_prev = 0.0, phi_upper = 0.0;  // Phi^{u_{t-1}}(A(t-1)), Phi^{u_t}(A(t))
  double phi_lower_prev = 0.0, phi_lower = 0.0;  // Phi_{l_{t-1}}(A(t-1)), Phi_{l_t}(A(t))
  double lambda_min = 0.0, lambda_max = 0.0;     // of A(t)
  double sum_upper = 0.0, sum_lower = 0.0;
  double upper = 0.0, lower = 0.0;
};

struct BssOptions {
  std::function<void(const BssIterate&)> observer;
  Deadline deadline;
};

inline SparsifierResult bss_sparsify(const ReducedInstance& reduced, double eps, const BssOptions& options = {}) {
  const BssParams params = bss_params(reduced.rank, eps);
  BssState state = bss_initial_state(reduced, params);
  Spectrum spec = eigh(state.a);

  for (std::size_t t = 1; t <= params.T; ++t) {
    options.deadline.check("bss");
    const BssStep step = detail::bss_step_from(spec, state, reduced, params);
    state.a.add_scaled(reduced.whitened[step.j], step.alpha);
    state.y[step.j] += step.alpha;
    const double u_prev = state.u;
    const double ell_prev = state.ell;
    state.t = t;
    state.u = params.u_0 + static_cast<double>(t) * params.delta_U;
    state.ell = params.ell_0 + static_cast<double>(t) * params.delta_L;
    spec = eigh(state.a);

    if (!(spec.max() < state.u) || !(spec.min() > state.ell)) {
      throw Error(ErrorCode::BarrierViolated, "iteration " + std::to_string(t) + ": spectrum [" +
                                                  std::to_string(spec.min()) + ", " +
                                                  std::to_string(spec.max()) + "] left the barriers");
    }
    if (options.observer) {
      BssIterate it;
      it.t = t;
      it.j = step.j;
      it.alpha = step.alpha;
      it.u_prev = u_prev;
      it.u = state.u;
      it.ell_prev = ell_prev;
      it.ell = state.ell;
      it.phi_upper_prev = step.phi_upper;
      it.phi_lower_prev = step.phi_lower;
      it.phi_upper = phi_upper(spec, state.u);
      it.phi_lower = phi_lower(spec, state.ell);
      it.lambda_min = spec.min();
      it.lambda_max = spec.max();
      it.sum_upper = step.sum_upper;
      it.sum_lower = step.sum_lower;
      it.upper = step.upper;
      it.lower = step.lower;
      options.observer(it);
    }
  }

  const double scale = 1.0 / spec.min();
  SparsifierResult result;
  result.y = std::move(state.y);
  for (double& v : result.y) v *= scale;
  result.certificate = certify(reduced, result.y);
  return result;
}

}  // namespace spsum
