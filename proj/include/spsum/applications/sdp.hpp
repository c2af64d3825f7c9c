#pragma once

// Thinning a feasible covering-SDP solution to small support, and the
// matrix analogue of approximate Caratheodory for convex combinations of
// PSD matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "spsum/collection.hpp"
#include "spsum/error.hpp"
#include "spsum/sparsify.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

/// min c^T z  s.t.  sum_i z_i A_i >= B, z >= 0, with a known feasible z*.
struct SdpInstance {
  std::vector<SymMatrix> a;
  SymMatrix b;
  std::vector<double> c;
  std::vector<double> z_star;
};

struct SdpResult {
  std::vector<double> z_bar;
  std::vector<double> y;
  SandwichCertificate certificate;  // of the block collection
  double cost = 0.0;                // c^T z_bar
  double cost_star = 0.0;           // c^T z*
  bool feasible = false;            // sum z_bar_i A_i - B is PSD
  bool cost_ok = false;             // cost <= (1+eps) cost_star

  bool passed() const { return feasible && cost_ok && certificate.passed; }
  std::size_t support() const { return count_support(z_bar); }
};

inline void validate_sdp(const SdpInstance& inst, double psd_tol = kDefaultPsdTol) {
  const std::size_t m = inst.a.size();
  if (m == 0) throw Error(ErrorCode::EmptyProblem, "no constraint matrices");
  if (inst.c.size() != m || inst.z_star.size() != m) {
    throw Error(ErrorCode::DimMismatch, "cost or z* length differs from the number of matrices");
  }
  SymMatrix lhs(inst.b.dim());
  for (std::size_t i = 0; i < m; ++i) {
    inst.a[i].check_same_dim(inst.b);
    if (!is_psd(inst.a[i], psd_tol)) throw Error(ErrorCode::NotPsd, "A_" + std::to_string(i) + " is not PSD");
    if (!(inst.c[i] >= 0.0)) throw Error(ErrorCode::InvalidCost, "c_" + std::to_string(i) + " is negative");
    if (!(inst.z_star[i] >= 0.0)) {
      throw Error(ErrorCode::NegativeWeight, "z*_" + std::to_string(i) + " is negative");
    }
    lhs.add_scaled(inst.a[i], inst.z_star[i]);
  }
  if (!is_psd(lhs - inst.b, psd_tol)) throw Error(ErrorCode::InfeasibleInput, "z* is not feasible");
}

/// Sparsifies the blocks z*_i A_i (+) c_i z*_i and sets z_bar_i = y_i z*_i.
inline SdpResult sparse_sdp(const SdpInstance& inst, double eps, const AlgorithmConfig& cfg = {},
                            double psd_tol = kDefaultPsdTol) {
  validate_sdp(inst, psd_tol);
  const std::size_t n = inst.b.dim();
  const std::size_t m = inst.a.size();
  std::vector<SymMatrix> blocks;
  blocks.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    blocks.push_back(direct_sum(inst.z_star[i] * inst.a[i], SymMatrix::diagonal({inst.c[i] * inst.z_star[i]})));
  }
  const SparsifierResult r = sandwich_sparsify(PsdCollection(n + 1, std::move(blocks)), eps, cfg);

  SdpResult out;
  out.y = r.y;
  out.certificate = r.certificate;
  out.z_bar.resize(m);
  SymMatrix lhs(n);
  for (std::size_t i = 0; i < m; ++i) {
    out.z_bar[i] = r.y[i] * inst.z_star[i];
    out.cost += inst.c[i] * out.z_bar[i];
    out.cost_star += inst.c[i] * inst.z_star[i];
    lhs.add_scaled(inst.a[i], out.z_bar[i]);
  }
  out.feasible = is_psd(lhs - inst.b, psd_tol);
  out.cost_ok = out.cost <= (1.0 + eps) * out.cost_star * (1.0 + kCertificateTol);
  return out;
}

struct CaratheodoryResult {
  std::vector<double> mu;
  SandwichCertificate certificate;  // sum mu_i B_i against sum lambda_i B_i

  std::size_t support() const { return count_support(mu); }
};

/// Rescales nonnegative `mu` so that its left-to-right sum is exactly 1.
/// The last nonzero entry becomes 1 minus the sum before it; then
/// prefix + (1 - prefix) rounds to 1 in binary64. If that entry is so small
/// that rounding would swamp it, the residual goes to the largest entry.
inline void normalize_simplex(std::vector<double>& mu) {
  const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidSimplexPoint, "weights sum to zero");
  for (double& v : mu) v /= total;
  std::size_t last = mu.size() - 1;
  while (mu[last] == 0.0) --last;
  const double prefix = std::accumulate(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(last), 0.0);
  const double tail = 1.0 - prefix;
  if (tail >= 0.5 * mu[last]) {
    mu[last] = tail;
    if (std::accumulate(mu.begin(), mu.end(), 0.0) == 1.0) return;
  }
  const auto top = static_cast<std::size_t>(std::max_element(mu.begin(), mu.end()) - mu.begin());
  for (int pass = 0; pass < 8; ++pass) {
    const double s = std::accumulate(mu.begin(), mu.end(), 0.0);
    if (s == 1.0) return;
    mu[top] += 1.0 - s;
  }
}

/// Given B = sum lambda_i B_i with lambda on the simplex, returns mu on the
/// simplex with small support and (1-eps) B <= sum mu_i B_i <= (1+eps) B.
inline CaratheodoryResult caratheodory(const std::vector<double>& lambda, const PsdCollection& coll, double eps,
                                       const AlgorithmConfig& cfg = {}) {
  if (lambda.size() != coll.size()) throw Error(ErrorCode::DimMismatch, "lambda length differs from collection");
  if (coll.size() == 0) throw Error(ErrorCode::EmptyProblem, "no matrices");
  double total = 0.0;
  for (double l : lambda) {
    if (!(l >= 0.0)) throw Error(ErrorCode::InvalidSimplexPoint, "negative lambda entry");
    total += l;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidSimplexPoint, "lambda does not sum to 1");

  const std::size_t n = coll.dim();
  std::vector<SymMatrix> blocks;
  std::vector<SymMatrix> scaled;
  blocks.reserve(coll.size());
  scaled.reserve(coll.size());
  for (std::size_t i = 0; i < coll.size(); ++i) {
    scaled.push_back(lambda[i] * coll[i]);
    blocks.push_back(direct_sum(scaled.back(), SymMatrix::diagonal({lambda[i]})));
  }
  const SparsifierResult r = sandwich_sparsify(PsdCollection(n + 1, std::move(blocks)), eps, cfg);

  CaratheodoryResult out;
  out.mu.resize(coll.size());
  for (std::size_t i = 0; i < coll.size(); ++i) out.mu[i] = r.y[i] * lambda[i];
  normalize_simplex(out.mu);

  // sum mu_i B_i = sum (mu_i / lambda_i) (lambda_i B_i)
  std::vector<double> w(coll.size(), 0.0);
  for (std::size_t i = 0; i < coll.size(); ++i) {
    if (out.mu[i] > 0.0) w[i] = out.mu[i] / lambda[i];
  }
  out.certificate = certify(reduce_to_identity(PsdCollection(n, std::move(scaled))), w);
  out.certificate.passed = out.certificate.within_window(eps, kCertificateTol);
  return out;
}

}  // namespace spsum
