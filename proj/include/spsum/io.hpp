#pragma once

// Whitespace-delimited text formats. Blank lines and '#' comments are
// ignored everywhere. Matrix indices are 0-based, vertex indices 1-based.
//
//   matrices:   n m
//               mat 0            (then "i j v" lines; symmetric completion)
//               mat 1 ...
//   graph:      n, then "u v w" per edge
//   hypergraph: n, then "k v1 .. vk w" per hyperedge
//   costs:      k m, then m lines of k costs (one line per edge)
//   family:     k, then k lines "c u1 v1 .. uc vc"
//   sdp:        n m, "mat" blocks for A_i, a "target" block for B,
//               then "cost c1 .. cm" and "zstar z1 .. zm"
//   simplex:    the matrices format followed by "lambda l1 .. lm"

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spsum/applications/graph.hpp"
#include "spsum/applications/hypergraph.hpp"
#include "spsum/applications/sdp.hpp"
#include "spsum/collection.hpp"
#include "spsum/error.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

namespace io_detail {

struct Line {
  std::size_t number = 0;  // 1-based
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::istringstream in{std::string(raw)};
    for (std::string tok; in >> tok;) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] inline void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline double to_double(const Line& l, std::size_t i) {
  if (i >= l.tokens.size()) fail(l.number, "missing value");
  const std::string& t = l.tokens[i];
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) fail(l.number, "bad number '" + t + "'");
  return v;
}

inline std::size_t to_index(const Line& l, std::size_t i) {
  if (i >= l.tokens.size()) fail(l.number, "missing index");
  const std::string& t = l.tokens[i];
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail(l.number, "bad integer '" + t + "'");
  return v;
}

inline void expect_count(const Line& l, std::size_t n) {
  if (l.tokens.size() != n) {
    fail(l.number, "expected " + std::to_string(n) + " fields, found " + std::to_string(l.tokens.size()));
  }
}

/// Reads "i j v" entries starting at lines[pos] until a line whose first
/// token is not numeric. Symmetric completion; a repeated unordered pair
/// must carry the same value.
inline SymMatrix read_entries(const std::vector<Line>& lines, std::size_t& pos, std::size_t n) {
  SymMatrix m(n);
  std::map<std::pair<std::size_t, std::size_t>, double> seen;
  while (pos < lines.size()) {
    const Line& l = lines[pos];
    const char c = l.tokens[0][0];
    if (!(c >= '0' && c <= '9')) break;
    expect_count(l, 3);
    std::size_t i = to_index(l, 0);
    std::size_t j = to_index(l, 1);
    const double v = to_double(l, 2);
    if (i >= n || j >= n) fail(l.number, "entry index out of range");
    if (i > j) std::swap(i, j);
    const auto [it, fresh] = seen.emplace(std::make_pair(i, j), v);
    if (!fresh && it->second != v) fail(l.number, "asymmetric duplicate entry");
    m.set(i, j, v);
    ++pos;
  }
  return m;
}

inline std::vector<SymMatrix> read_mat_blocks(const std::vector<Line>& lines, std::size_t& pos, std::size_t n,
                                              std::size_t m) {
  std::vector<SymMatrix> mats;
  for (std::size_t k = 0; k < m; ++k) {
    if (pos >= lines.size()) fail(lines.empty() ? 1 : lines.back().number, "missing mat " + std::to_string(k));
    const Line& h = lines[pos];
    if (h.tokens[0] != "mat") fail(h.number, "expected 'mat " + std::to_string(k) + "'");
    expect_count(h, 2);
    if (to_index(h, 1) != k) fail(h.number, "matrices must be numbered 0..m-1 in order");
    ++pos;
    mats.push_back(read_entries(lines, pos, n));
  }
  return mats;
}

inline std::pair<std::size_t, std::size_t> read_header2(const std::vector<Line>& lines) {
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty input");
  expect_count(lines[0], 2);
  const std::size_t n = to_index(lines[0], 0);
  const std::size_t m = to_index(lines[0], 1);
  if (n == 0) fail(lines[0].number, "dimension must be positive");
  return {n, m};
}

inline std::vector<double> read_vector_line(const std::vector<Line>& lines, std::size_t& pos, const char* key,
                                            std::size_t m) {
  if (pos >= lines.size()) throw Error(ErrorCode::ParseError, std::string("missing '") + key + "' line");
  const Line& l = lines[pos];
  if (l.tokens[0] != key) fail(l.number, std::string("expected '") + key + "'");
  expect_count(l, m + 1);
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = to_double(l, i + 1);
  ++pos;
  return v;
}

inline void expect_end(const std::vector<Line>& lines, std::size_t pos) {
  if (pos < lines.size()) fail(lines[pos].number, "unexpected trailing content");
}

/// 17 significant digits, enough to round-trip any double.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void emit_entries(std::ostringstream& out, const SymMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i; j < m.dim(); ++j) {
      if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << fmt(m(i, j)) << '\n';
    }
  }
}

}  // namespace io_detail

inline std::vector<SymMatrix> parse_matrices(std::string_view text) {
  const auto lines = io_detail::tokenize(text);
  const auto [n, m] = io_detail::read_header2(lines);
  std::size_t pos = 1;
  auto mats = io_detail::read_mat_blocks(lines, pos, n, m);
  io_detail::expect_end(lines, pos);
  return mats;
}

inline PsdCollection parse_matrix_collection(std::string_view text, double psd_tol = kDefaultPsdTol) {
  const auto lines = io_detail::tokenize(text);
  const auto [n, m] = io_detail::read_header2(lines);
  std::size_t pos = 1;
  auto mats = io_detail::read_mat_blocks(lines, pos, n, m);
  io_detail::expect_end(lines, pos);
  return PsdCollection(n, std::move(mats), psd_tol);
}

inline std::string emit_matrix_collection(const std::vector<SymMatrix>& mats) {
  std::ostringstream out;
  out << (mats.empty() ? 1 : mats.front().dim()) << ' ' << mats.size() << '\n';
  for (std::size_t k = 0; k < mats.size(); ++k) {
    out << "mat " << k << '\n';
    io_detail::emit_entries(out, mats[k]);
  }
  return out.str();
}

inline WeightedGraph parse_graph(std::string_view text) {
  const auto lines = io_detail::tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty input");
  io_detail::expect_count(lines[0], 1);
  const std::size_t n = io_detail::to_index(lines[0], 0);
  if (n == 0) io_detail::fail(lines[0].number, "vertex count must be positive");
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    io_detail::expect_count(l, 3);
    const std::size_t u = io_detail::to_index(l, 0);
    const std::size_t v = io_detail::to_index(l, 1);
    if (u < 1 || u > n || v < 1 || v > n) io_detail::fail(l.number, "vertex out of range");
    edges.push_back(Edge{u - 1, v - 1, io_detail::to_double(l, 2)});
  }
  try {
    return WeightedGraph(n, std::move(edges));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline std::string emit_graph(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.n() << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << ' ' << io_detail::fmt(e.w) << '\n';
  return out.str();
}

inline WeightedHypergraph parse_hypergraph(std::string_view text) {
  const auto lines = io_detail::tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty input");
  io_detail::expect_count(lines[0], 1);
  const std::size_t n = io_detail::to_index(lines[0], 0);
  if (n == 0) io_detail::fail(lines[0].number, "vertex count must be positive");
  std::vector<Hyperedge> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    const std::size_t size = io_detail::to_index(l, 0);
    io_detail::expect_count(l, size + 2);
    Hyperedge e;
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t v = io_detail::to_index(l, i + 1);
      if (v < 1 || v > n) io_detail::fail(l.number, "vertex out of range");
      e.vertices.push_back(v - 1);
    }
    e.w = io_detail::to_double(l, size + 1);
    edges.push_back(std::move(e));
  }
  try {
    return WeightedHypergraph(n, std::move(edges));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline std::string emit_hypergraph(const WeightedHypergraph& h) {
  std::ostringstream out;
  out << h.n() << '\n';
  for (const auto& e : h.edges()) {
    out << e.vertices.size();
    for (std::size_t v : e.vertices) out << ' ' << v + 1;
    out << ' ' << io_detail::fmt(e.w) << '\n';
  }
  return out.str();
}

/// Returns k vectors of length m: result[i][e] is cost i of edge e.
inline std::vector<std::vector<double>> parse_costs(std::string_view text) {
  const auto lines = io_detail::tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty input");
  io_detail::expect_count(lines[0], 2);
  const std::size_t k = io_detail::to_index(lines[0], 0);
  const std::size_t m = io_detail::to_index(lines[0], 1);
  if (lines.size() != m + 1) {
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(m) + " cost lines");
  }
  std::vector<std::vector<double>> costs(k, std::vector<double>(m));
  for (std::size_t e = 0; e < m; ++e) {
    const auto& l = lines[e + 1];
    io_detail::expect_count(l, k);
    for (std::size_t i = 0; i < k; ++i) costs[i][e] = io_detail::to_double(l, i);
  }
  return costs;
}

inline std::string emit_costs(const std::vector<std::vector<double>>& costs) {
  std::ostringstream out;
  const std::size_t m = costs.empty() ? 0 : costs.front().size();
  out << costs.size() << ' ' << m << '\n';
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < costs.size(); ++i) out << (i ? " " : "") << io_detail::fmt(costs[i][e]);
    out << '\n';
  }
  return out.str();
}

inline std::vector<Subgraph> parse_family(std::string_view text, std::size_t n) {
  const auto lines = io_detail::tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty input");
  io_detail::expect_count(lines[0], 1);
  const std::size_t k = io_detail::to_index(lines[0], 0);
  if (lines.size() != k + 1) throw Error(ErrorCode::ParseError, "expected " + std::to_string(k) + " members");
  std::vector<Subgraph> family(k);
  for (std::size_t f = 0; f < k; ++f) {
    const auto& l = lines[f + 1];
    const std::size_t c = io_detail::to_index(l, 0);
    io_detail::expect_count(l, 2 * c + 1);
    for (std::size_t i = 0; i < c; ++i) {
      const std::size_t u = io_detail::to_index(l, 2 * i + 1);
      const std::size_t v = io_detail::to_index(l, 2 * i + 2);
      if (u < 1 || u > n || v < 1 || v > n) io_detail::fail(l.number, "vertex out of range");
      family[f].edges.emplace_back(u - 1, v - 1);
    }
  }
  return family;
}

inline std::string emit_family(const std::vector<Subgraph>& family) {
  std::ostringstream out;
  out << family.size() << '\n';
  for (const auto& f : family) {
    out << f.edges.size();
    for (const auto& [u, v] : f.edges) out << ' ' << u + 1 << ' ' << v + 1;
    out << '\n';
  }
  return out.str();
}

inline SdpInstance parse_sdp(std::string_view text) {
  const auto lines = io_detail::tokenize(text);
  const auto [n, m] = io_detail::read_header2(lines);
  std::size_t pos = 1;
  SdpInstance inst;
  inst.a = io_detail::read_mat_blocks(lines, pos, n, m);
  if (pos >= lines.size() || lines[pos].tokens[0] != "target") {
    throw Error(ErrorCode::ParseError, "missing 'target' block");
  }
  io_detail::expect_count(lines[pos], 1);
  ++pos;
  inst.b = io_detail::read_entries(lines, pos, n);
  inst.c = io_detail::read_vector_line(lines, pos, "cost", m);
  inst.z_star = io_detail::read_vector_line(lines, pos, "zstar", m);
  io_detail::expect_end(lines, pos);
  return inst;
}

inline std::string emit_sdp(const SdpInstance& inst) {
  std::ostringstream out;
  out << inst.b.dim() << ' ' << inst.a.size() << '\n';
  for (std::size_t k = 0; k < inst.a.size(); ++k) {
    out << "mat " << k << '\n';
    io_detail::emit_entries(out, inst.a[k]);
  }
  out << "target\n";
  io_detail::emit_entries(out, inst.b);
  out << "cost";
  for (double c : inst.c) out << ' ' << io_detail::fmt(c);
  out << "\nzstar";
  for (double z : inst.z_star) out << ' ' << io_detail::fmt(z);
  out << '\n';
  return out.str();
}

struct SimplexInput {
  std::vector<SymMatrix> matrices;
  std::vector<double> lambda;
};

inline SimplexInput parse_simplex(std::string_view text) {
  const auto lines = io_detail::tokenize(text);
  const auto [n, m] = io_detail::read_header2(lines);
  std::size_t pos = 1;
  SimplexInput in;
  in.matrices = io_detail::read_mat_blocks(lines, pos, n, m);
  in.lambda = io_detail::read_vector_line(lines, pos, "lambda", m);
  io_detail::expect_end(lines, pos);
  return in;
}

inline std::string emit_simplex(const SimplexInput& in) {
  std::string out = emit_matrix_collection(in.matrices);
  out += "lambda";
  for (double l : in.lambda) out += ' ' + io_detail::fmt(l);
  out += '\n';
  return out;
}

}  // namespace spsum
