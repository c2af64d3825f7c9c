#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "spsum/applications/graph.hpp"
#include "spsum/applications/hypergraph.hpp"
#include "support.hpp"

using namespace spsum;
using spsum::testing::Gen;

namespace {

WeightedHypergraph random_uniform(Gen& g, std::size_t n, std::size_t m, std::size_t r) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<Hyperedge> edges;
  std::size_t tries = 0;
  while (edges.size() < m) {
    std::vector<std::size_t> vs;
    while (vs.size() < r) {
      const std::size_t v = g.index(0, n - 1);
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
    std::sort(vs.begin(), vs.end());
    // distinct edges when possible; small pools fall back to repeats
    if (!seen.insert(vs).second && ++tries < 1000) continue;
    edges.push_back({vs, g.uniform(0.5, 2.0)});
  }
  return WeightedHypergraph(n, edges);
}

std::vector<bool> mask_side(std::size_t n, std::uint64_t mask) {
  std::vector<bool> s(n);
  for (std::size_t v = 0; v < n; ++v) s[v] = (mask >> v) & 1u;
  return s;
}

}  // namespace

TEST(Hypergraph, Validation) {
  EXPECT_THROW(WeightedHypergraph(3, {{{0}, 1.0}}), Error);
  EXPECT_THROW(WeightedHypergraph(3, {{{0, 0, 1}, 1.0}}), Error);
  EXPECT_THROW(WeightedHypergraph(3, {{{0, 3}, 1.0}}), Error);
  EXPECT_THROW(WeightedHypergraph(3, {{{0, 1}, -1.0}}), Error);
  const WeightedHypergraph h(4, {{{3, 0, 2}, 1.0}, {{1, 2, 0}, 1.0}});
  EXPECT_EQ(h.edges()[0].vertices, (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(h.uniformity(), 3u);
  EXPECT_EQ(WeightedHypergraph(4, {{{0, 1}, 1.0}, {{1, 2, 3}, 1.0}}).uniformity(), 0u);
}

TEST(CliqueLaplacian, TriangleAndK4Spectrum) {
  const SymMatrix tri = hypergraph_laplacian(WeightedHypergraph(3, {{{0, 1, 2}, 1.0}}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(tri(i, j), i == j ? 2.0 : -1.0);
  auto ev = spsum::testing::jacobi_eigenvalues(clique_laplacian(4, {0, 1, 2, 3}));
  std::sort(ev.begin(), ev.end());
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], 4.0, 1e-12);
}

TEST(CliqueLaplacian, TwoUniformIsGraphLaplacian) {
  Gen g(4);
  const WeightedHypergraph h = random_uniform(g, 6, 8, 2);
  SymMatrix expect(6);
  for (const auto& e : h.edges()) expect.add_scaled(edge_laplacian(6, e.vertices[0], e.vertices[1], e.w), 1.0);
  EXPECT_LE(spsum::testing::max_abs_diff(hypergraph_laplacian(h), expect), 1e-14);
}

TEST(CutWeight, Examples) {
  const WeightedHypergraph h(3, {{{0, 1, 2}, 1.0}});
  EXPECT_EQ(cut_weight(h, {true, false, false}), 1.0);
  EXPECT_EQ(cut_weight_star(h, {true, false, false}), 2.0);
  EXPECT_EQ(cut_weight(h, {false, false, false}), 0.0);
  EXPECT_EQ(cut_weight_star(h, {false, false, false}), 0.0);
  // r-uniform single edge, |S cap E| = a  ->  a (r - a) w
  const std::size_t r = 6;
  std::vector<std::size_t> vs(r);
  for (std::size_t i = 0; i < r; ++i) vs[i] = i;
  const WeightedHypergraph one(r, {{vs, 1.5}});
  for (std::size_t a = 0; a <= r; ++a) {
    std::vector<bool> side(r, false);
    for (std::size_t i = 0; i < a; ++i) side[i] = true;
    EXPECT_DOUBLE_EQ(cut_weight_star(one, side), static_cast<double>(a * (r - a)) * 1.5);
  }
}

TEST(CutWeight, PropertyStarIsQuadraticForm) {
  Gen g(10);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = g.index(3, 10);
    const WeightedHypergraph h = random_uniform(g, n, g.index(1, 15), g.index(2, std::min<std::size_t>(n, 5)));
    const SymMatrix l = hypergraph_laplacian(h);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto side = mask_side(n, mask);
      std::vector<double> x(n);
      for (std::size_t v = 0; v < n; ++v) x[v] = side[v] ? 1.0 : 0.0;
      EXPECT_NEAR(cut_weight_star(h, side), spsum::testing::quad(l, x), 1e-9);
    }
  }
}

TEST(CutWeight, PropertyUniformSandwich) {
  // (r-1) w <= w* <= floor(r/2) ceil(r/2) w on every cut
  Gen g(12);
  for (std::size_t r = 2; r <= 6; ++r) {
    const std::size_t n = r + 3;
    const WeightedHypergraph h = random_uniform(g, n, 12, r);
    const double top = static_cast<double>((r / 2) * ((r + 1) / 2));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto side = mask_side(n, mask);
      const double w = cut_weight(h, side), ws = cut_weight_star(h, side);
      EXPECT_GE(ws, (r - 1.0) * w - 1e-9);
      EXPECT_LE(ws, top * w + 1e-9);
    }
  }
}

TEST(SparsifyHypergraph, SingleEdge) {
  const WeightedHypergraph h(4, {{{0, 1, 3}, 2.0}});
  const HypergraphSparsifyResult r = sparsify_hypergraph(h, 0.5);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_NEAR(r.certificate.ratio(), 1.0, 1e-12);
}

TEST(SparsifyHypergraph, ThreeUniformNine) {
  Gen g(2025);
  const WeightedHypergraph h = random_uniform(g, 9, 60, 3);
  const HypergraphSparsifyResult r = sparsify_hypergraph(h, 0.5);
  EXPECT_LE(r.certificate.ratio(), 25.0 / 9.0);
  const CutReport rep = cut_sparsifier_report(h, r.subgraph, 0.5, 3);
  EXPECT_EQ(rep.cuts_checked, 510u);
  EXPECT_TRUE(rep.passed());
}

TEST(SparsifyHypergraph, TwoUniformMatchesGraph) {
  Gen g(3);
  const WeightedHypergraph h = random_uniform(g, 7, 12, 2);
  std::vector<Edge> edges;
  for (const auto& e : h.edges()) edges.push_back({e.vertices[0], e.vertices[1], e.w});
  // repeated pairs cannot form a graph
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : edges) pairs.insert({e.u, e.v});
  ASSERT_EQ(pairs.size(), edges.size());
  const WeightedGraph gr(7, edges);
  EXPECT_EQ(sparsify_hypergraph(h, 0.5).y, sparsify_graph(gr, 0.5).y);
}

TEST(CutReport, SixVertices) {
  Gen g(6);
  const WeightedHypergraph h = random_uniform(g, 6, 12, 3);
  const CutReport rep = cut_sparsifier_report(h, sparsify_hypergraph(h, 0.5).subgraph, 0.5, 3);
  EXPECT_EQ(rep.cuts_checked, 62u);
  EXPECT_TRUE(rep.passed());
}

TEST(CutReport, FourUniformWindow) {
  Gen g(8);
  const WeightedHypergraph h = random_uniform(g, 8, 30, 4);
  const CutReport rep = cut_sparsifier_report(h, sparsify_hypergraph(h, 0.5).subgraph, 0.5, 4);
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.identity_violations.empty());
}

TEST(CutReport, FlagsABadSparsifier) {
  const WeightedHypergraph h(4, {{{0, 1, 2}, 1.0}, {{1, 2, 3}, 1.0}});
  const WeightedHypergraph bad(4, {{{0, 1, 2}, 3.0}});
  const CutReport rep = cut_sparsifier_report(h, bad, 0.5, 3);
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.star_violations.empty());
  EXPECT_TRUE(std::is_sorted(rep.star_violations.begin(), rep.star_violations.end()));
}

TEST(CutReport, Guards) {
  const WeightedHypergraph big(21, {{{0, 1}, 1.0}});
  EXPECT_THROW(cut_sparsifier_report(big, big, 0.5, 2), Error);
  const WeightedHypergraph h(4, {{{0, 1, 2}, 1.0}});
  EXPECT_THROW(cut_sparsifier_report(h, h, 0.5, 4), Error);
}
