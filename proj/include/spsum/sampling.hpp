#pragma once

// Random-sampling sparsifier (Ahlswede-Winter) and its derandomization by
// pessimistic estimators. Both draw T indices j with probability
// p_j = tr C_j / r and return y_j = (#picks of j) * r / (T tr C_j), so that
// sum y_j C_j = (r/T) sum_picks C_j / tr C_j.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spsum/collection.hpp"
#include "spsum/control.hpp"
#include "spsum/error.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

struct SamplingPlan {
  std::vector<double> p;  // p_i = tr C_i / r
  double mu = 0.0;        // 1 / r
  double eps = 0.0;
  std::size_t T = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// Smallest integer strictly greater than x.
inline std::size_t next_integer_above(double x) {
  return static_cast<std::size_t>(std::floor(x)) + 1;
}

inline void check_sampling_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1/2]");
}

inline std::vector<double> trace_distribution(const ReducedInstance& reduced) {
  std::vector<double> p(reduced.size(), 0.0);
  const double r = static_cast<double>(reduced.rank);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(reduced.traces[i], 0.0) / r;
  return p;
}

inline std::vector<double> quantized_weights(const ReducedInstance& reduced, const std::vector<std::size_t>& counts,
                                             std::size_t T) {
  std::vector<double> y(counts.size(), 0.0);
  const double scale = static_cast<double>(reduced.rank) / static_cast<double>(T);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) y[j] = static_cast<double>(counts[j]) * scale / reduced.traces[j];
  }
  return y;
}

}  // namespace detail

/// T = smallest integer > (2 ln 2)(ln r + 2 ln 2) / (eps^2 mu).
inline SamplingPlan aw_plan(const ReducedInstance& reduced, double eps, std::uint64_t seed) {
  detail::check_sampling_eps(eps);
  SamplingPlan plan;
  plan.p = detail::trace_distribution(reduced);
  plan.mu = 1.0 / static_cast<double>(reduced.rank);
  plan.eps = eps;
  plan.seed = seed;
  const double ln2 = std::log(2.0);
  plan.T = detail::next_integer_above(2.0 * ln2 * (std::log(static_cast<double>(reduced.rank)) + 2.0 * ln2) /
                                      (eps * eps * plan.mu));
  return plan;
}

/// T = smallest integer > (2 ln 2) r ln(2r) / eps^2.
inline SamplingPlan pe_plan(const ReducedInstance& reduced, double eps) {
  detail::check_sampling_eps(eps);
  SamplingPlan plan;
  plan.p = detail::trace_distribution(reduced);
  plan.mu = 1.0 / static_cast<double>(reduced.rank);
  plan.eps = eps;
  const double r = static_cast<double>(reduced.rank);
  plan.T = detail::next_integer_above(2.0 * std::log(2.0) * r * std::log(2.0 * r) / (eps * eps));
  return plan;
}

/// Inverse-CDF sampler over a fixed distribution. The stream is
/// std::mt19937_64 seeded with `seed`; each draw takes the top 53 bits of
/// one output as u in [0,1) and returns the first index whose cumulative
/// probability exceeds u. Identical on every conforming platform.
class IndexSampler {
 public:
  IndexSampler(const std::vector<double>& p, std::uint64_t seed) : rng_(seed) {
    cumulative_.reserve(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      cumulative_.push_back(acc);
      if (p[i] > 0.0) last_positive_ = i;
    }
    if (!(acc > 0.0)) throw Error(ErrorCode::EmptyProblem, "distribution has no mass");
  }

  std::size_t draw() {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53 * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return std::min(idx, last_positive_);
  }

 private:
  std::mt19937_64 rng_;
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

inline SparsifierResult aw_sample(const ReducedInstance& reduced, double eps, std::uint64_t seed,
                                  const Deadline& deadline = {}) {
  const SamplingPlan plan = aw_plan(reduced, eps, seed);
  IndexSampler sampler(plan.p, seed);
  std::vector<std::size_t> counts(reduced.size(), 0);
  for (std::size_t t = 0; t < plan.T; ++t) {
    if ((t & 1023) == 0) deadline.check("aw-sample");
    ++counts[sampler.draw()];
  }
  SparsifierResult result;
  result.y = detail::quantized_weights(reduced, counts, plan.T);
  result.certificate = certify(reduced, result.y);
  return result;
}

/// State of the derandomized sampler. The two estimators after i picks are
///   log phi_i = t T (1-eps) mu + log tr exp(-t S) + (T-i) log ||E exp(-t X)||
///   log psi_i = -t' T (1+eps) mu + log tr exp(t' S) + (T-i) log ||E exp(t' X)||
/// with X = C_j / tr C_j drawn with probability p_j and S the sum of picks.
struct PeState {
  SamplingPlan plan;
  std::vector<std::size_t> picks;
  double t_plus = 0.0;   // t, exponent of the lower-tail estimator
  double t_minus = 0.0;  // t', exponent of the upper-tail estimator
  double log_norm_lower = 0.0;  // log ||E exp(-t X)||
  double log_norm_upper = 0.0;  // log ||E exp(t' X)||
  SymMatrix sum;                // sum of picked X
  double log_value = 0.0;       // log(phi_i + psi_i) at the current pick count
  bool degenerate = false;      // r = 1: every draw equals the identity

  std::size_t steps() const { return picks.size(); }
};

namespace detail {

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double pe_log_value(const PeState& st, const SymMatrix& sum, std::size_t i) {
  const double T = static_cast<double>(st.plan.T);
  const double mu = st.plan.mu;
  const double e = st.plan.eps;
  const double rest = static_cast<double>(st.plan.T - i);
  const double log_phi = st.t_plus * T * (1.0 - e) * mu + log_trace_exp(-st.t_plus * sum) +
                         rest * st.log_norm_lower;
  const double log_psi = -st.t_minus * T * (1.0 + e) * mu + log_trace_exp(st.t_minus * sum) +
                         rest * st.log_norm_upper;
  return log_add(log_phi, log_psi);
}

/// log ||sum_j p_j exp(s C_j / tr C_j)||
inline double log_expected_exp_norm(const ReducedInstance& reduced, const std::vector<double>& p, double s) {
  SymMatrix e(reduced.rank);
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    if (!(p[j] > 0.0)) continue;
    e.add_scaled(sym_exp((s / reduced.traces[j]) * reduced.whitened[j]), p[j]);
  }
  return std::log(eigh(e).max());
}

}  // namespace detail

/// Sets t, t' and the two expectation norms and checks phi_0 + psi_0 < 1.
/// `T_override` replaces the plan's T (the CLI raises it on failure).
/// t = ln((1-(1-eps)mu)/((1-mu)(1-eps))), t' = ln((1+eps)(1-mu)/(1-(1+eps)mu)).
inline std::pair<double, double> pe_exponents(double mu, double eps) {
  if (!((1.0 + eps) * mu < 1.0)) throw Error(ErrorCode::InvalidArgument, "(1+eps) mu must be below 1");
  return {std::log((1.0 - (1.0 - eps) * mu) / ((1.0 - mu) * (1.0 - eps))),
          std::log((1.0 + eps) * (1.0 - mu) / (1.0 - (1.0 + eps) * mu))};
}

inline PeState pe_params(const ReducedInstance& reduced, double eps,
                         std::optional<std::size_t> T_override = std::nullopt) {
  PeState st;
  st.plan = pe_plan(reduced, eps);
  if (T_override) {
    if (*T_override == 0) throw Error(ErrorCode::InvalidArgument, "T must be positive");
    st.plan.T = *T_override;
  }
  st.sum = SymMatrix(reduced.rank);
  if (reduced.rank == 1) {
    st.degenerate = true;
    st.log_value = -std::numeric_limits<double>::infinity();
    return st;
  }
  std::tie(st.t_plus, st.t_minus) = pe_exponents(st.plan.mu, eps);
  st.log_norm_lower = detail::log_expected_exp_norm(reduced, st.plan.p, -st.t_plus);
  st.log_norm_upper = detail::log_expected_exp_norm(reduced, st.plan.p, st.t_minus);
  st.log_value = detail::pe_log_value(st, st.sum, 0);
  if (!(st.log_value < 0.0)) {
    throw Error(ErrorCode::TNotLargeEnough, "phi_0 + psi_0 = " + std::to_string(std::exp(st.log_value)) +
                                                " for T = " + std::to_string(st.plan.T));
  }
  return st;
}

struct PeStep {
  std::size_t j = 0;
  double log_value = 0.0;  // log(phi + psi) after the pick
};

/// The pick minimizing phi_{i+1} + psi_{i+1} (lowest index on ties).
/// Does not modify the state.
inline PeStep pe_greedy_step(const PeState& st, const ReducedInstance& reduced) {
  if (st.steps() >= st.plan.T) throw Error(ErrorCode::InvalidArgument, "all T picks already made");
  PeStep best;
  best.log_value = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    if (!(st.plan.p[j] > 0.0)) continue;
    if (st.degenerate) {
      return PeStep{j, -std::numeric_limits<double>::infinity()};
    }
    SymMatrix next = st.sum;
    next.add_scaled(reduced.whitened[j], 1.0 / reduced.traces[j]);
    const double v = detail::pe_log_value(st, next, st.steps() + 1);
    if (!found || v < best.log_value) {
      best.j = j;
      best.log_value = v;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::EmptyProblem, "no member has positive trace");
  return best;
}

inline void pe_apply(PeState& st, const ReducedInstance& reduced, const PeStep& step) {
  st.picks.push_back(step.j);
  st.sum.add_scaled(reduced.whitened[step.j], 1.0 / reduced.traces[step.j]);
  st.log_value = step.log_value;
}

struct PeIterate {
  std::size_t t = 0;
  std::size_t j = 0;
  double log_value_prev = 0.0;
  double log_value = 0.0;
};

struct PeOptions {
  std::optional<std::size_t> T;
  std::function<void(const PeIterate&)> observer;
  Deadline deadline;
};

inline SparsifierResult pe_sparsify(const ReducedInstance& reduced, double eps, const PeOptions& options = {}) {
  PeState st = pe_params(reduced, eps, options.T);
  std::vector<std::size_t> counts(reduced.size(), 0);
  for (std::size_t t = 1; t <= st.plan.T; ++t) {
    options.deadline.check("pe");
    const double prev = st.log_value;
    const PeStep step = pe_greedy_step(st, reduced);
    pe_apply(st, reduced, step);
    ++counts[step.j];
    if (options.observer) options.observer(PeIterate{t, step.j, prev, st.log_value});
  }
  SparsifierResult result;
  result.y = detail::quantized_weights(reduced, counts, st.plan.T);
  result.certificate = certify(reduced, result.y);
  return result;
}

}  // namespace spsum
