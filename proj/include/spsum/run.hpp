#pragma once

// One batch run: parse an input of a given kind, sparsify, and produce a
// report whose text form is stable across runs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spsum/applications/graph.hpp"
#include "spsum/applications/hypergraph.hpp"
#include "spsum/applications/sdp.hpp"
#include "spsum/io.hpp"
#include "spsum/sparsify.hpp"

namespace spsum {

enum class InputKind { Matrices, Graph, Hypergraph, Sdp, Simplex };

inline const char* to_string(InputKind k) {
  switch (k) {
    case InputKind::Matrices: return "matrices";
    case InputKind::Graph: return "graph";
    case InputKind::Hypergraph: return "hypergraph";
    case InputKind::Sdp: return "sdp";
    case InputKind::Simplex: return "simplex";
  }
  return "?";
}

inline InputKind parse_kind(std::string_view s) {
  for (InputKind k : {InputKind::Matrices, InputKind::Graph, InputKind::Hypergraph, InputKind::Sdp,
                      InputKind::Simplex}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown input kind '" + std::string(s) + "'");
}

struct RunConfig {
  Algorithm algorithm = Algorithm::Bss;
  double eps = 0.5;
  std::uint64_t seed = 0;
  double psd_tol = kDefaultPsdTol;
  std::optional<double> rank_tol;  // defaults to 1e-10 n
  InputKind kind = InputKind::Matrices;
  Deadline deadline;
};

struct RunInput {
  std::string text;
  std::optional<std::string> costs;   // graph kind only
  std::optional<std::string> family;  // graph kind only
};

struct RunReport {
  std::string algorithm;
  std::string kind;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t rank = 0;
  double eps = 0.0;
  double eps_run = 0.0;  // accuracy the core algorithm ran at
  bool deterministic = true;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::size_t, double>> weights;  // support entries only
  std::vector<std::pair<std::string, std::string>> checks;
  SandwichCertificate certificate;
  bool passed = false;
  double wall_seconds = 0.0;  // not part of emit()
};

/// The derived schedule of `a` at dimension r and accuracy eps.
inline std::vector<std::pair<std::string, double>> parameter_dump(Algorithm a, const ReducedInstance& reduced,
                                                                  double eps, const AlgorithmConfig& cfg) {
  const std::size_t r = reduced.rank;
  std::vector<std::pair<std::string, double>> out;
  auto add = [&](const char* name, double v) { out.emplace_back(name, v); };
  switch (a) {
    case Algorithm::Bss: {
      const BssParams p = bss_params(r, eps);
      add("eps", p.eps);
      add("delta_L", p.delta_L);
      add("eps_L", p.eps_L);
      add("ell_0", p.ell_0);
      add("delta_U", p.delta_U);
      add("eps_U", p.eps_U);
      add("u_0", p.u_0);
      add("T", static_cast<double>(p.T));
      add("ratio_bound", p.ratio_bound());
      break;
    }
    case Algorithm::MmwumWf: {
      const WfParams p = wf_params(r, eps);
      add("eps", p.eps);
      add("eta", p.eta);
      add("delta_U", p.delta_U);
      add("delta_L", p.delta_L);
      add("gamma", p.gamma);
      add("T", static_cast<double>(p.T));
      break;
    }
    case Algorithm::MmwumBlock: {
      const BlockParams p = block_params(r, eps);
      add("eps", p.eps);
      add("beta", p.beta);
      add("eta", p.eta);
      add("ell", p.ell);
      add("rho", p.rho);
      add("T", static_cast<double>(p.T));
      add("error_bound", p.error_bound());
      break;
    }
    case Algorithm::AwSample: {
      const SamplingPlan p = aw_plan(reduced, eps, cfg.seed);
      add("eps", p.eps);
      add("mu", p.mu);
      add("T", static_cast<double>(p.T));
      break;
    }
    case Algorithm::Pe: {
      const std::size_t T = resolve_pe_T(reduced, eps, cfg.pe_T);
      const PeState st = pe_params(reduced, eps, T);
      add("eps", eps);
      add("mu", st.plan.mu);
      add("T_derived", static_cast<double>(pe_plan(reduced, eps).T));
      add("T", static_cast<double>(T));
      add("t", st.t_plus);
      add("t_prime", st.t_minus);
      add("phi0_plus_psi0", std::exp(st.log_value));
      break;
    }
  }
  return out;
}

namespace run_detail {

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline void add_weights(RunReport& rep, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) rep.weights.emplace_back(i, values[i]);
  }
}

}  // namespace run_detail

inline RunReport run(const RunConfig& config, const RunInput& input) {
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
  RunReport rep;
  rep.algorithm = to_string(config.algorithm);
  rep.kind = to_string(config.kind);
  rep.eps = config.eps;
  rep.deterministic = is_deterministic(config.algorithm);
  rep.seed = config.seed;

  AlgorithmConfig cfg;
  cfg.algorithm = config.algorithm;
  cfg.seed = config.seed;
  cfg.pe_retry = true;
  cfg.deadline = config.deadline;
  cfg.on_reduced = [&](const ReducedInstance& reduced, double eps_run) {
    rep.rank = reduced.rank;
    rep.eps_run = eps_run;
    rep.params = parameter_dump(config.algorithm, reduced, eps_run, cfg);
  };

  const double eps = config.eps;
  const double tol = 1e-6;
  switch (config.kind) {
    case InputKind::Matrices: {
      const PsdCollection coll = parse_matrix_collection(input.text, config.psd_tol);
      rep.n = coll.dim();
      rep.m = coll.size();
      const ReducedInstance reduced =
          reduce_to_identity(coll, config.rank_tol.value_or(default_rank_tol(coll.dim())));
      const SparsifierResult r = run_algorithm(reduced, eps, cfg);
      run_detail::add_weights(rep, r.y);
      rep.certificate = r.certificate;
      if (config.algorithm == Algorithm::Bss) {
        const double bound = bss_params(reduced.rank, eps).ratio_bound();
        rep.passed = r.certificate.lambda_min > 0.0 && r.certificate.ratio() <= bound + tol;
        rep.checks.emplace_back("ratio_bound", io_detail::fmt(bound));
      } else {
        rep.passed = r.certificate.within_window(eps, tol);
      }
      break;
    }
    case InputKind::Graph: {
      const WeightedGraph g = parse_graph(input.text);
      rep.n = g.n();
      rep.m = g.m();
      const auto costs = input.costs ? parse_costs(*input.costs) : std::vector<std::vector<double>>{};
      const auto family = input.family ? parse_family(*input.family, g.n()) : std::vector<Subgraph>{};
      if (input.costs && input.family) {
        throw Error(ErrorCode::InvalidArgument, "--costs and --family cannot be combined");
      }
      if (input.family) {
        const FamilySparsifyResult r = subgraph_family_sparsify(g, family, eps, cfg);
        rep.certificate = r.graph.certificate;
        rep.passed = r.passed() && r.graph.certificate.passed;
        std::vector<double> w(g.m(), 0.0);
        for (std::size_t e = 0; e < g.m(); ++e) w[e] = r.graph.y[e] * g.edge(e).w;
        run_detail::add_weights(rep, w);
        for (std::size_t f = 0; f < r.members.size(); ++f) {
          const auto& c = r.members[f];
          rep.checks.emplace_back("family " + std::to_string(f),
                                  "lambda_min " + io_detail::fmt(c.lambda_min) + " lambda_max " +
                                      io_detail::fmt(c.lambda_max) + " pass " + run_detail::bool_text(c.passed));
        }
      } else {
        const CostSparsifyResult r = sparsify_with_costs(g, costs, eps, cfg);
        rep.certificate = r.graph.certificate;
        rep.passed = r.passed();
        std::vector<double> w(g.m(), 0.0);
        for (std::size_t e = 0; e < g.m(); ++e) w[e] = r.graph.y[e] * g.edge(e).w;
        run_detail::add_weights(rep, w);
        for (std::size_t i = 0; i < r.costs.size(); ++i) {
          const auto& c = r.costs[i];
          rep.checks.emplace_back("cost " + std::to_string(i),
                                  "original " + io_detail::fmt(c.original) + " sparsified " +
                                      io_detail::fmt(c.sparsified) + " pass " + run_detail::bool_text(c.passed));
        }
      }
      break;
    }
    case InputKind::Hypergraph: {
      const WeightedHypergraph h = parse_hypergraph(input.text);
      rep.n = h.n();
      rep.m = h.m();
      const HypergraphSparsifyResult r = sparsify_hypergraph(h, eps, cfg);
      rep.certificate = r.certificate;
      rep.passed = r.certificate.passed;
      std::vector<double> w(h.m(), 0.0);
      for (std::size_t e = 0; e < h.m(); ++e) w[e] = r.y[e] * h.edges()[e].w;
      run_detail::add_weights(rep, w);
      break;
    }
    case InputKind::Sdp: {
      const SdpInstance inst = parse_sdp(input.text);
      rep.n = inst.b.dim();
      rep.m = inst.a.size();
      const SdpResult r = sparse_sdp(inst, eps, cfg, config.psd_tol);
      rep.certificate = r.certificate;
      rep.passed = r.passed();
      run_detail::add_weights(rep, r.z_bar);
      rep.checks.emplace_back("cost", io_detail::fmt(r.cost));
      rep.checks.emplace_back("cost_star", io_detail::fmt(r.cost_star));
      rep.checks.emplace_back("cost_ok", run_detail::bool_text(r.cost_ok));
      rep.checks.emplace_back("feasible", run_detail::bool_text(r.feasible));
      break;
    }
    case InputKind::Simplex: {
      SimplexInput in = parse_simplex(input.text);
      rep.n = in.matrices.empty() ? 0 : in.matrices.front().dim();
      rep.m = in.matrices.size();
      const PsdCollection coll(rep.n, std::move(in.matrices), config.psd_tol);
      const CaratheodoryResult r = caratheodory(in.lambda, coll, eps, cfg);
      rep.certificate = r.certificate;
      rep.passed = r.certificate.passed;
      run_detail::add_weights(rep, r.mu);
      double s = 0.0;
      for (double v : r.mu) s += v;
      rep.checks.emplace_back("mu_sum", io_detail::fmt(s));
      break;
    }
  }
  return rep;
}

inline std::string emit(const RunReport& rep) {
  using io_detail::fmt;
  std::ostringstream out;
  out << "algorithm: " << rep.algorithm << '\n';
  out << "kind: " << rep.kind << '\n';
  out << "n: " << rep.n << '\n';
  out << "m: " << rep.m << '\n';
  out << "rank: " << rep.rank << '\n';
  out << "epsilon: " << fmt(rep.eps) << '\n';
  out << "epsilon_run: " << fmt(rep.eps_run) << '\n';
  out << "deterministic: " << run_detail::bool_text(rep.deterministic) << '\n';
  out << "seed: " << rep.seed << '\n';
  for (const auto& [name, v] : rep.params) out << "param " << name << ": " << fmt(v) << '\n';
  out << "weights: " << rep.weights.size() << '\n';
  for (const auto& [i, v] : rep.weights) out << i << ' ' << fmt(v) << '\n';
  for (const auto& [name, v] : rep.checks) out << "check " << name << ": " << v << '\n';
  out << "certificate:\n";
  out << "lambda_min: " << fmt(rep.certificate.lambda_min) << '\n';
  out << "lambda_max: " << fmt(rep.certificate.lambda_max) << '\n';
  out << "support_size: " << rep.certificate.support_size << '\n';
  out << "epsilon_achieved: " << fmt(rep.certificate.epsilon_achieved) << '\n';
  out << "pass: " << run_detail::bool_text(rep.passed) << '\n';
  return out.str();
}

}  // namespace spsum
