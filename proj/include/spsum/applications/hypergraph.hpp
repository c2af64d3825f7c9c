#pragma once

// Hypergraphs with clique-expansion Laplacians, their spectral
// sparsification, and exhaustive cut reports for small vertex counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spsum/collection.hpp"
#include "spsum/error.hpp"
#include "spsum/sparsify.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

struct Hyperedge {
  std::vector<std::size_t> vertices;  // 0-based, sorted, distinct
  double w = 1.0;
};

class WeightedHypergraph {
 public:
  WeightedHypergraph() = default;

  WeightedHypergraph(std::size_t n, std::vector<Hyperedge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ == 0) throw Error(ErrorCode::InvalidArgument, "hypergraph needs at least one vertex");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto& vs = edges_[i].vertices;
      std::sort(vs.begin(), vs.end());
      if (vs.size() < 2) throw Error(ErrorCode::InvalidArgument, "hyperedge " + std::to_string(i) + " is too small");
      if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) {
        throw Error(ErrorCode::InvalidArgument, "hyperedge " + std::to_string(i) + " repeats a vertex");
      }
      if (vs.back() >= n_) throw Error(ErrorCode::InvalidArgument, "hyperedge " + std::to_string(i) + " out of range");
      if (!(edges_[i].w > 0.0) || !std::isfinite(edges_[i].w)) {
        throw Error(ErrorCode::InvalidArgument, "hyperedge " + std::to_string(i) + " has non-positive weight");
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Hyperedge>& edges() const noexcept { return edges_; }

  /// Common edge size r, or 0 when sizes differ or there are no edges.
  std::size_t uniformity() const {
    if (edges_.empty()) return 0;
    const std::size_t r = edges_.front().vertices.size();
    for (const auto& e : edges_) {
      if (e.vertices.size() != r) return 0;
    }
    return r;
  }

 private:
  std::size_t n_ = 1;
  std::vector<Hyperedge> edges_;
};

/// Laplacian of the unit-weight clique on `vertices`, in dimension n.
inline SymMatrix clique_laplacian(std::size_t n, const std::vector<std::size_t>& vertices) {
  SymMatrix l(n);
  const double deg = static_cast<double>(vertices.size()) - 1.0;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    l.add_to(vertices[a], vertices[a], deg);
    for (std::size_t b = a + 1; b < vertices.size(); ++b) l.add_to(vertices[a], vertices[b], -1.0);
  }
  return l;
}

inline SymMatrix hypergraph_laplacian(const WeightedHypergraph& h) {
  SymMatrix l(h.n());
  for (const auto& e : h.edges()) l.add_scaled(clique_laplacian(h.n(), e.vertices), e.w);
  return l;
}

/// Total weight of hyperedges with vertices on both sides.
inline double cut_weight(const WeightedHypergraph& h, const std::vector<bool>& side) {
  double total = 0.0;
  for (const auto& e : h.edges()) {
    std::size_t in = 0;
    for (std::size_t v : e.vertices) in += side.at(v) ? 1 : 0;
    if (in > 0 && in < e.vertices.size()) total += e.w;
  }
  return total;
}

/// sum_E w_E |S cap E| |E \ S|
inline double cut_weight_star(const WeightedHypergraph& h, const std::vector<bool>& side) {
  double total = 0.0;
  for (const auto& e : h.edges()) {
    std::size_t in = 0;
    for (std::size_t v : e.vertices) in += side.at(v) ? 1 : 0;
    total += e.w * static_cast<double>(in) * static_cast<double>(e.vertices.size() - in);
  }
  return total;
}

struct HypergraphSparsifyResult {
  WeightedHypergraph subgraph;
  std::vector<double> y;
  std::vector<std::size_t> kept;
  SandwichCertificate certificate;
};

inline HypergraphSparsifyResult sparsify_hypergraph(const WeightedHypergraph& h, double eps,
                                                    const AlgorithmConfig& cfg = {}) {
  std::vector<SymMatrix> mats;
  mats.reserve(h.m());
  for (const auto& e : h.edges()) mats.push_back(e.w * clique_laplacian(h.n(), e.vertices));
  const SparsifierResult r = sandwich_sparsify(PsdCollection(h.n(), std::move(mats)), eps, cfg);

  HypergraphSparsifyResult out;
  out.y = r.y;
  out.certificate = r.certificate;
  std::vector<Hyperedge> kept;
  for (std::size_t i = 0; i < h.m(); ++i) {
    if (out.y[i] > 0.0) {
      Hyperedge e = h.edges()[i];
      e.w *= out.y[i];
      kept.push_back(std::move(e));
      out.kept.push_back(i);
    }
  }
  out.subgraph = WeightedHypergraph(h.n(), std::move(kept));
  return out;
}

inline constexpr std::size_t kMaxCutEnumerationVertices = 20;

/// Cuts are encoded as bitmasks over the vertices (bit v set iff v in S).
struct CutReport {
  std::size_t cuts_checked = 0;
  std::size_t uniformity = 0;
  std::vector<std::uint64_t> star_violations;      // w*_H(S) outside [w*(S), (1+eps) w*(S)]
  std::vector<std::uint64_t> window_violations;    // w_H(S)/w(S) outside the r-uniform window
  std::vector<std::uint64_t> identity_violations;  // r = 3 only: w* != 2w on either hypergraph
  std::vector<std::uint64_t> weight_violations;    // r = 3 only: w_H(S) outside [w(S), (1+eps) w(S)]

  bool passed() const {
    return star_violations.empty() && window_violations.empty() && identity_violations.empty() &&
           weight_violations.empty();
  }
};

/// Checks every nontrivial cut S (all 2^n - 2 of them). `r` is the
/// uniformity of `h` (0 for a non-uniform hypergraph, which skips the
/// r-dependent checks). Refuses n > 20.
inline CutReport cut_sparsifier_report(const WeightedHypergraph& h, const WeightedHypergraph& sub, double eps,
                                       std::size_t r, double tol = 1e-9) {
  if (h.n() != sub.n()) throw Error(ErrorCode::DimMismatch, "vertex counts differ");
  if (h.n() > kMaxCutEnumerationVertices) {
    throw Error(ErrorCode::InvalidArgument, "cut enumeration limited to n <= 20");
  }
  if (r != 0 && h.uniformity() != r) throw Error(ErrorCode::InvalidArgument, "hypergraph is not r-uniform");

  CutReport rep;
  rep.uniformity = r;
  const std::size_t n = h.n();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<bool> side(n);
  const double rd = static_cast<double>(r);
  const double window_lo = r >= 2 ? (rd - 1.0) / (rd * rd / 4.0) : 0.0;
  const double window_hi = r >= 2 ? (1.0 + eps) * rd * rd / (4.0 * (rd - 1.0)) : 0.0;

  auto within = [tol](double value, double lo, double hi) {
    const double scale = std::max(1.0, std::abs(hi));
    return value >= lo - tol * scale && value <= hi + tol * scale;
  };

  for (std::uint64_t mask = 1; mask < full; ++mask) {
    for (std::size_t v = 0; v < n; ++v) side[v] = ((mask >> v) & 1u) != 0;
    ++rep.cuts_checked;
    const double ws = cut_weight_star(h, side);
    const double ws_sub = cut_weight_star(sub, side);
    if (!within(ws_sub, ws, (1.0 + eps) * ws)) rep.star_violations.push_back(mask);
    if (r < 2) continue;

    const double w = cut_weight(h, side);
    const double w_sub = cut_weight(sub, side);
    if (!within(w_sub, window_lo * w, window_hi * w)) rep.window_violations.push_back(mask);
    if (r == 3) {
      if (std::abs(ws - 2.0 * w) > tol * std::max(1.0, ws) ||
          std::abs(ws_sub - 2.0 * w_sub) > tol * std::max(1.0, ws_sub)) {
        rep.identity_violations.push_back(mask);
      }
      if (!within(w_sub, w, (1.0 + eps) * w)) rep.weight_violations.push_back(mask);
    }
  }
  return rep;
}

}  // namespace spsum
