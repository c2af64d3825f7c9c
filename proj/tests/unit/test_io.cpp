#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spsum/io.hpp"
#include "spsum/run.hpp"
#include "support.hpp"

using namespace spsum;
using spsum::testing::Gen;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// "param name: value" lines of an emitted report
std::map<std::string, double> params_of(const std::string& text) {
  std::map<std::string, double> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("param ", 0) != 0) continue;
    const auto colon = line.find(':');
    out[line.substr(6, colon - 6)] = std::strtod(line.c_str() + colon + 1, nullptr);
  }
  return out;
}

}  // namespace

TEST(ParseMatrices, Examples) {
  const auto one = parse_matrices("2 1\nmat 0\n0 0 1.0\n1 1 1.0\n");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(spsum::testing::max_abs_diff(one[0], SymMatrix::identity(2)), 0.0);
  const auto two = parse_matrices("2 2\nmat 0\n0 0 1\nmat 1\n1 1 1\n");
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(spsum::testing::max_abs_diff(two[0], SymMatrix::diagonal({1.0, 0.0})), 0.0);
  EXPECT_EQ(spsum::testing::max_abs_diff(two[1], SymMatrix::diagonal({0.0, 1.0})), 0.0);
}

TEST(ParseMatrices, SymmetricCompletionAndComments) {
  const auto m = parse_matrices("# header\n2 1\nmat 0  # first\n0 1 0.5\n0 0 1\n1 0 0.5\n1 1 1\n");
  EXPECT_EQ(m[0](1, 0), 0.5);
  EXPECT_EQ(m[0](0, 1), 0.5);
}

TEST(ParseMatrices, Errors) {
  EXPECT_EQ(code_of([] { parse_matrices("2 1\n0 0 1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrices("2 1\nmat 0\n0 1 1\n1 0 2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrices("2 1\nmat 0\n0 2 1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrices("2 1\nmat 0\n0 0 x\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrices("2 2\nmat 1\n0 0 1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_matrices(""); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([] { parse_matrices("2 1\nmat 0\n0 0 1\n0 0 x\n"); }).find("line 4"), std::string::npos);
}

TEST(ParseGraph, Examples) {
  const WeightedGraph g = parse_graph("2\n1 2 3.0\n");
  EXPECT_EQ(g.n(), 2u);
  ASSERT_EQ(g.m(), 1u);
  EXPECT_EQ(g.edge(0).u, 0u);
  EXPECT_EQ(g.edge(0).v, 1u);
  EXPECT_EQ(g.edge(0).w, 3.0);
  EXPECT_EQ(code_of([] { parse_graph("2\n1 3 1.0\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_graph("2\n1 1 1.0\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_graph("2\n1 2\n"); }), ErrorCode::ParseError);
}

TEST(ParseHypergraph, Examples) {
  const WeightedHypergraph h = parse_hypergraph("3\n3 1 2 3 1.0\n");
  ASSERT_EQ(h.m(), 1u);
  EXPECT_EQ(h.edges()[0].vertices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(h.edges()[0].w, 1.0);
  EXPECT_EQ(code_of([] { parse_hypergraph("3\n3 1 2 4 1.0\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_hypergraph("3\n3 1 2 1.0\n"); }), ErrorCode::ParseError);
}

TEST(ParseCosts, LayoutAndErrors) {
  const auto c = parse_costs("2 3\n1 4\n2 5\n3 6\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(c[1], (std::vector<double>{4, 5, 6}));
  EXPECT_EQ(code_of([] { parse_costs("2 3\n1 4\n2 5\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_costs("2 1\n1\n"); }), ErrorCode::ParseError);
}

TEST(ParseFamily, LayoutAndErrors) {
  const auto f = parse_family("2\n1 1 2\n2 2 3 3 4\n", 4);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1].edges[1], (std::pair<std::size_t, std::size_t>{2, 3}));
  EXPECT_EQ(code_of([] { parse_family("1\n1 1 5\n", 4); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_family("1\n2 1 2\n", 4); }), ErrorCode::ParseError);
}

TEST(ParseSdp, MissingBlocks) {
  EXPECT_EQ(code_of([] { parse_sdp("1 1\nmat 0\n0 0 1\ncost 1\nzstar 1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_sdp("1 1\nmat 0\n0 0 1\ntarget\n0 0 1\nzstar 1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_sdp("1 1\nmat 0\n0 0 1\ntarget\n0 0 1\ncost 1\nzstar 1 2\n"); }),
            ErrorCode::ParseError);
}

TEST(RoundTrip, AllFormatsIdempotent) {
  Gen g(1);
  const auto mats = spsum::testing::random_collection(g, 4, 5, 2);
  const std::string a = emit_matrix_collection(mats);
  EXPECT_EQ(emit_matrix_collection(parse_matrices(a)), a);
  const auto back = parse_matrices(a);
  for (std::size_t i = 0; i < mats.size(); ++i) EXPECT_EQ(spsum::testing::max_abs_diff(back[i], mats[i]), 0.0);

  const std::string gr = emit_graph(parse_graph("4\n2 1 0.1\n3 4 2.5\n1 4 1e-3\n"));
  EXPECT_EQ(emit_graph(parse_graph(gr)), gr);
  const std::string hg = emit_hypergraph(parse_hypergraph("5\n3 5 1 2 0.3\n2 4 3 7\n"));
  EXPECT_EQ(emit_hypergraph(parse_hypergraph(hg)), hg);
  EXPECT_EQ(hg, "5\n3 1 2 5 0.29999999999999999\n2 3 4 7\n");
  const std::string co = emit_costs(parse_costs("1 2\n0.5\n3\n"));
  EXPECT_EQ(emit_costs(parse_costs(co)), co);
  const std::string fa = emit_family(parse_family("1\n2 1 2 2 3\n", 3));
  EXPECT_EQ(emit_family(parse_family(fa, 3)), fa);
  const std::string sd = emit_sdp(parse_sdp("2 1\nmat 0\n0 0 2\n1 1 2\ntarget\n0 0 1\n1 1 1\ncost 1\nzstar 1\n"));
  EXPECT_EQ(emit_sdp(parse_sdp(sd)), sd);
  const std::string sx = emit_simplex(parse_simplex("1 2\nmat 0\n0 0 1\nmat 1\n0 0 2\nlambda 0.25 0.75\n"));
  EXPECT_EQ(emit_simplex(parse_simplex(sx)), sx);
}

TEST(Run, BssIdentityDecomposition) {
  RunConfig cfg;
  cfg.eps = 0.5;
  const RunReport rep = run(cfg, {"2 2\nmat 0\n0 0 1\nmat 1\n1 1 1\n", {}, {}});
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.weights.size(), 32u);
  const std::string text = emit(rep);
  EXPECT_EQ(text, emit(run(cfg, {"2 2\nmat 0\n0 0 1\nmat 1\n1 1 1\n", {}, {}})));
  EXPECT_NE(text.find("pass: true\n"), std::string::npos);
}

TEST(Run, ParameterDumpReproducesSchedule) {
  RunConfig cfg;
  cfg.eps = 0.3;
  Gen g(3);
  const std::string input = emit_matrix_collection(spsum::testing::random_collection(g, 5, 30, 2));
  const auto p = params_of(emit(run(cfg, {input, {}, {}})));
  const BssParams b = bss_params(5, 0.3);
  EXPECT_EQ(p.at("delta_U"), b.delta_U);
  EXPECT_EQ(p.at("u_0"), b.u_0);
  EXPECT_EQ(p.at("ell_0"), b.ell_0);
  EXPECT_EQ(p.at("eps_U"), b.eps_U);
  EXPECT_EQ(p.at("T"), static_cast<double>(b.T));

  cfg.algorithm = Algorithm::MmwumWf;
  const auto w = params_of(emit(run(cfg, {input, {}, {}})));
  const WfParams wp = wf_params(5, 0.3);
  EXPECT_EQ(w.at("gamma"), wp.gamma);
  EXPECT_EQ(w.at("delta_L"), wp.delta_L);
  EXPECT_EQ(w.at("T"), static_cast<double>(wp.T));
}

TEST(Run, PeIsDeterministicAndPasses) {
  RunConfig cfg;
  cfg.algorithm = Algorithm::Pe;
  cfg.eps = 0.45;
  const RunInput in{"3 3\nmat 0\n0 0 1\nmat 1\n1 1 1\nmat 2\n2 2 1\n", {}, {}};
  const std::string text = emit(run(cfg, in));
  EXPECT_NE(text.find("deterministic: true\n"), std::string::npos);
  EXPECT_NE(text.find("pass: true\n"), std::string::npos);
  EXPECT_EQ(text, emit(run(cfg, in)));
}

TEST(Run, AwSampleDependsOnlyOnSeed) {
  RunConfig cfg;
  cfg.algorithm = Algorithm::AwSample;
  cfg.eps = 0.5;
  cfg.seed = 12345;
  Gen g(4);
  const RunInput in{emit_matrix_collection(spsum::testing::random_collection(g, 4, 40, 2)), {}, {}};
  const std::string a = emit(run(cfg, in));
  EXPECT_EQ(a, emit(run(cfg, in)));
  EXPECT_NE(a.find("deterministic: false\n"), std::string::npos);
  EXPECT_NE(a.find("seed: 12345\n"), std::string::npos);
}

TEST(Run, RejectsBadConfig) {
  RunConfig cfg;
  cfg.eps = 1.5;
  EXPECT_THROW(run(cfg, {"1 1\nmat 0\n0 0 1\n", {}, {}}), Error);
  cfg.eps = 0.5;
  cfg.kind = InputKind::Graph;
  EXPECT_THROW(run(cfg, {"3\n1 2 1\n", std::string("1 1\n1\n"), std::string("0\n")}), Error);
  EXPECT_THROW(parse_algorithm("simplex-method"), Error);
  EXPECT_THROW(parse_kind("tree"), Error);
}

TEST(Run, GraphKinds) {
  RunConfig cfg;
  cfg.kind = InputKind::Graph;
  const std::string k4 = "4\n1 2 1\n1 3 1\n1 4 1\n2 3 1\n2 4 1\n3 4 1\n";
  EXPECT_TRUE(run(cfg, {k4, {}, {}}).passed);
  EXPECT_TRUE(run(cfg, {k4, std::string("1 6\n1\n2\n3\n1\n2\n3\n"), {}}).passed);
  EXPECT_TRUE(run(cfg, {k4, {}, std::string("1\n3 1 2 2 3 1 3\n")}).passed);
}
