#pragma once

// Graph spectral sparsification and its variants with side constraints:
// linear costs, edge colorings, and families of subgraphs. Every variant
// builds one PSD matrix per edge (possibly with extra diagonal blocks) and
// sparsifies that collection.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spsum/collection.hpp"
#include "spsum/error.hpp"
#include "spsum/sparsify.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

struct Edge {
  std::size_t u = 0;  // 0-based, u < v
  std::size_t v = 0;
  double w = 1.0;
};

class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Endpoints are stored as (min, max). Self-loops, out-of-range vertices,
  /// non-positive weights and repeated pairs throw InvalidArgument.
  WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ == 0) throw Error(ErrorCode::InvalidArgument, "graph needs at least one vertex");
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      Edge& e = edges_[i];
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u == e.v) throw Error(ErrorCode::InvalidArgument, "self-loop at edge " + std::to_string(i));
      if (e.v >= n_) throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(i) + " out of range");
      if (!(e.w > 0.0) || !std::isfinite(e.w)) {
        throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(i) + " has non-positive weight");
      }
      if (!seen.emplace(std::make_pair(e.u, e.v), i).second) {
        throw Error(ErrorCode::InvalidArgument, "duplicate edge " + std::to_string(i));
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  /// Index of edge {a,b}, if present.
  std::optional<std::size_t> find(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].u == a && edges_[i].v == b) return i;
    }
    return std::nullopt;
  }

 private:
  std::size_t n_ = 1;
  std::vector<Edge> edges_;
};

/// w (e_u - e_v)(e_u - e_v)^T in dimension n.
inline SymMatrix edge_laplacian(std::size_t n, std::size_t u, std::size_t v, double w) {
  SymMatrix m(n);
  m.add_to(u, u, w);
  m.add_to(v, v, w);
  m.add_to(u, v, -w);
  return m;
}

inline SymMatrix laplacian(const WeightedGraph& g) {
  SymMatrix l(g.n());
  for (const Edge& e : g.edges()) {
    l.add_to(e.u, e.u, e.w);
    l.add_to(e.v, e.v, e.w);
    l.add_to(e.u, e.v, -e.w);
  }
  return l;
}

/// x^T L x for the indicator x of `side`.
inline double graph_cut_weight(const WeightedGraph& g, const std::vector<bool>& side) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (side.at(e.u) != side.at(e.v)) total += e.w;
  }
  return total;
}

struct GraphSparsifyResult {
  WeightedGraph subgraph;            // support edges with weights y_e w_e
  std::vector<double> y;             // per input edge
  std::vector<std::size_t> kept;     // input indices of the support edges
  SandwichCertificate certificate;   // of the full block collection
  SandwichCertificate laplacian_certificate;
};

namespace detail {

inline WeightedGraph reweighted_support(const WeightedGraph& g, const std::vector<double>& y,
                                        std::vector<std::size_t>& kept) {
  std::vector<Edge> out;
  kept.clear();
  for (std::size_t i = 0; i < g.m(); ++i) {
    if (y[i] > 0.0) {
      Edge e = g.edge(i);
      e.w *= y[i];
      out.push_back(e);
      kept.push_back(i);
    }
  }
  return WeightedGraph(g.n(), std::move(out));
}

inline std::vector<SymMatrix> edge_matrices(const WeightedGraph& g) {
  std::vector<SymMatrix> mats;
  mats.reserve(g.m());
  for (const Edge& e : g.edges()) mats.push_back(edge_laplacian(g.n(), e.u, e.v, e.w));
  return mats;
}

/// Certificate of sum y_e L_e against L over the edges listed in `idx`.
inline SandwichCertificate restricted_certificate(const WeightedGraph& g, const std::vector<double>& y,
                                                  const std::vector<std::size_t>& idx, double eps) {
  std::vector<SymMatrix> mats;
  std::vector<double> w;
  for (std::size_t i : idx) {
    const Edge& e = g.edge(i);
    mats.push_back(edge_laplacian(g.n(), e.u, e.v, e.w));
    w.push_back(y[i]);
  }
  SandwichCertificate c = certify(reduce_to_identity(PsdCollection(g.n(), std::move(mats))), w);
  c.passed = c.passes(eps, kCertificateTol);
  return c;
}

inline std::vector<std::size_t> all_indices(std::size_t m) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  return idx;
}

inline GraphSparsifyResult finish_graph(const WeightedGraph& g, SparsifierResult r, double eps) {
  GraphSparsifyResult out;
  out.y = std::move(r.y);
  out.certificate = r.certificate;
  out.subgraph = reweighted_support(g, out.y, out.kept);
  out.laplacian_certificate = restricted_certificate(g, out.y, all_indices(g.m()), eps);
  return out;
}

}  // namespace detail

inline GraphSparsifyResult sparsify_graph(const WeightedGraph& g, double eps, const AlgorithmConfig& cfg = {}) {
  PsdCollection coll(g.n(), detail::edge_matrices(g));
  return detail::finish_graph(g, sandwich_sparsify(coll, eps, cfg), eps);
}

struct CostReport {
  double original = 0.0;    // sum_e w_e c_e
  double sparsified = 0.0;  // sum_e w_H(e) c_e
  bool passed = false;      // original <= sparsified <= (1+eps) original
};

struct CostSparsifyResult {
  GraphSparsifyResult graph;
  std::vector<CostReport> costs;

  bool passed() const {
    if (!graph.certificate.passed || !graph.laplacian_certificate.passed) return false;
    return std::all_of(costs.begin(), costs.end(), [](const CostReport& c) { return c.passed; });
  }
};

/// `costs[i][e]` is the i-th cost of edge e. Each edge becomes
/// w_e [L_e (+) c_{1,e} (+) ... (+) c_{k,e}] in dimension n + k.
inline CostSparsifyResult sparsify_with_costs(const WeightedGraph& g, const std::vector<std::vector<double>>& costs,
                                              double eps, const AlgorithmConfig& cfg = {}) {
  const std::size_t k = costs.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (costs[i].size() != g.m()) {
      throw Error(ErrorCode::InvalidCost, "cost vector " + std::to_string(i) + " has the wrong length");
    }
    for (double c : costs[i]) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw Error(ErrorCode::InvalidCost, "cost vector " + std::to_string(i) + " has a negative entry");
      }
    }
  }
  const std::size_t dim = g.n() + k;
  std::vector<SymMatrix> mats;
  mats.reserve(g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    SymMatrix b(dim);
    b.add_to(ed.u, ed.u, ed.w);
    b.add_to(ed.v, ed.v, ed.w);
    b.add_to(ed.u, ed.v, -ed.w);
    for (std::size_t i = 0; i < k; ++i) b.set(g.n() + i, g.n() + i, ed.w * costs[i][e]);
    mats.push_back(std::move(b));
  }
  PsdCollection coll(dim, std::move(mats));

  CostSparsifyResult out;
  out.graph = detail::finish_graph(g, sandwich_sparsify(coll, eps, cfg), eps);
  const double slack = 1.0 + kCertificateTol;
  for (std::size_t i = 0; i < k; ++i) {
    CostReport rep;
    for (std::size_t e = 0; e < g.m(); ++e) {
      rep.original += g.edge(e).w * costs[i][e];
      rep.sparsified += out.graph.y[e] * g.edge(e).w * costs[i][e];
    }
    rep.passed = rep.sparsified >= rep.original / slack && rep.sparsified <= (1.0 + eps) * rep.original * slack;
    out.costs.push_back(rep);
  }
  return out;
}

struct ClassReport {
  double original = 0.0;
  double sparsified = 0.0;
  bool passed = false;  // (1-eps) W <= W_H <= (1+eps) W
};

struct RainbowResult {
  GraphSparsifyResult graph;
  std::vector<ClassReport> classes;

  bool passed() const {
    if (!graph.laplacian_certificate.passed) return false;
    return std::all_of(classes.begin(), classes.end(), [](const ClassReport& c) { return c.passed; });
  }
};

/// `classes` partitions the edge indices; every edge must appear exactly once.
inline RainbowResult rainbow_sparsify(const WeightedGraph& g, const std::vector<std::vector<std::size_t>>& classes,
                                      double eps, const AlgorithmConfig& cfg = {}) {
  std::vector<std::size_t> seen(g.m(), 0);
  std::vector<std::vector<double>> costs(classes.size(), std::vector<double>(g.m(), 0.0));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t e : classes[i]) {
      if (e >= g.m()) throw Error(ErrorCode::InvalidColoring, "class " + std::to_string(i) + " names a missing edge");
      ++seen[e];
      costs[i][e] = 1.0;
    }
  }
  for (std::size_t e = 0; e < g.m(); ++e) {
    if (seen[e] != 1) {
      throw Error(ErrorCode::InvalidColoring,
                  "edge " + std::to_string(e) + " is colored " + std::to_string(seen[e]) + " times");
    }
  }
  CostSparsifyResult inner = sparsify_with_costs(g, costs, eps, cfg);
  RainbowResult out;
  out.graph = std::move(inner.graph);
  const double slack = 1.0 + kCertificateTol;
  for (const CostReport& c : inner.costs) {
    ClassReport rep{c.original, c.sparsified, false};
    rep.passed = rep.sparsified >= (1.0 - eps) * rep.original / slack &&
                 rep.sparsified <= (1.0 + eps) * rep.original * slack;
    out.classes.push_back(rep);
  }
  return out;
}

/// A subgraph given by its edges as 0-based vertex pairs of the host graph.
struct Subgraph {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct FamilySparsifyResult {
  GraphSparsifyResult graph;
  std::vector<SandwichCertificate> members;  // one per family member

  bool passed() const {
    if (!graph.laplacian_certificate.passed) return false;
    return std::all_of(members.begin(), members.end(), [](const SandwichCertificate& c) { return c.passed; });
  }
};

/// Edge e becomes w_e [L_G(e) (+) L_F1(e) (+) ... ], where L_F(e) is the unit
/// edge Laplacian on V(F) when e lies in F and zero otherwise.
inline FamilySparsifyResult subgraph_family_sparsify(const WeightedGraph& g, const std::vector<Subgraph>& family,
                                                     double eps, const AlgorithmConfig& cfg = {}) {
  // Per member: host edge indices and a local numbering of V(F).
  std::vector<std::vector<std::size_t>> member_edges(family.size());
  std::vector<std::map<std::size_t, std::size_t>> local(family.size());
  std::size_t dim = g.n();
  std::vector<std::size_t> offset(family.size(), 0);
  for (std::size_t f = 0; f < family.size(); ++f) {
    for (const auto& [a, b] : family[f].edges) {
      const auto idx = g.find(a, b);
      if (!idx) {
        throw Error(ErrorCode::InvalidFamily, "member " + std::to_string(f) + " uses an edge not in the graph");
      }
      if (std::find(member_edges[f].begin(), member_edges[f].end(), *idx) != member_edges[f].end()) {
        throw Error(ErrorCode::InvalidFamily, "member " + std::to_string(f) + " repeats an edge");
      }
      member_edges[f].push_back(*idx);
      local[f].emplace(a, local[f].size());
      local[f].emplace(b, local[f].size());
    }
    offset[f] = dim;
    dim += local[f].size();
  }

  std::vector<SymMatrix> mats;
  mats.reserve(g.m());
  for (std::size_t e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    SymMatrix b(dim);
    b.add_to(ed.u, ed.u, ed.w);
    b.add_to(ed.v, ed.v, ed.w);
    b.add_to(ed.u, ed.v, -ed.w);
    for (std::size_t f = 0; f < family.size(); ++f) {
      if (std::find(member_edges[f].begin(), member_edges[f].end(), e) == member_edges[f].end()) continue;
      const std::size_t pu = offset[f] + local[f].at(ed.u);
      const std::size_t pv = offset[f] + local[f].at(ed.v);
      b.add_to(pu, pu, ed.w);
      b.add_to(pv, pv, ed.w);
      b.add_to(pu, pv, -ed.w);
    }
    mats.push_back(std::move(b));
  }
  PsdCollection coll(dim, std::move(mats));

  FamilySparsifyResult out;
  out.graph = detail::finish_graph(g, sandwich_sparsify(coll, eps, cfg), eps);
  for (std::size_t f = 0; f < family.size(); ++f) {
    if (member_edges[f].empty()) {
      SandwichCertificate c;
      c.lambda_min = c.lambda_max = 1.0;
      c.epsilon_achieved = 0.0;
      c.passed = true;
      out.members.push_back(c);
      continue;
    }
    out.members.push_back(detail::restricted_certificate(g, out.graph.y, member_edges[f], eps));
  }
  return out;
}

}  // namespace spsum
