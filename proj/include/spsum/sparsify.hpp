#pragma once

// Algorithm selection and the wrapper used by the applications: run a
// sparsifier at an inner accuracy and rescale so that
// B <= sum y_i B_i <= (1+eps) B.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "spsum/bss.hpp"
#include "spsum/collection.hpp"
#include "spsum/control.hpp"
#include "spsum/error.hpp"
#include "spsum/mmwum_block.hpp"
#include "spsum/mmwum_wf.hpp"
#include "spsum/sampling.hpp"

namespace spsum {

enum class Algorithm { Bss, MmwumWf, MmwumBlock, AwSample, Pe };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Bss: return "bss";
    case Algorithm::MmwumWf: return "mmwum-wf";
    case Algorithm::MmwumBlock: return "mmwum-block";
    case Algorithm::AwSample: return "aw-sample";
    case Algorithm::Pe: return "pe";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::Bss, Algorithm::MmwumWf, Algorithm::MmwumBlock, Algorithm::AwSample,
                      Algorithm::Pe}) {
    if (s == to_string(a)) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(s) + "'");
}

inline bool is_deterministic(Algorithm a) { return a != Algorithm::AwSample; }

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::Bss;
  std::uint64_t seed = 0;
  std::optional<std::size_t> pe_T;  // overrides the derandomized sampler's T
  bool pe_retry = false;             // double T until phi_0 + psi_0 < 1
  Deadline deadline;
  // Called with the whitened instance and the accuracy the algorithm runs at.
  std::function<void(const ReducedInstance&, double)> on_reduced;
};

/// Starting from `T` (or the derived T), doubles until phi_0 + psi_0 < 1.
inline std::size_t resolve_pe_T(const ReducedInstance& reduced, double eps, std::optional<std::size_t> T) {
  std::size_t cur = T.value_or(pe_plan(reduced, eps).T);
  for (int attempt = 0; attempt < 32; ++attempt) {
    try {
      pe_params(reduced, eps, cur);
      return cur;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TNotLargeEnough) throw;
      cur *= 2;
    }
  }
  throw Error(ErrorCode::TNotLargeEnough, "no T up to " + std::to_string(cur) + " works");
}

inline SparsifierResult run_algorithm(const ReducedInstance& reduced, double eps, const AlgorithmConfig& cfg) {
  if (cfg.on_reduced) cfg.on_reduced(reduced, eps);
  switch (cfg.algorithm) {
    case Algorithm::Bss: {
      BssOptions o;
      o.deadline = cfg.deadline;
      return bss_sparsify(reduced, eps, o);
    }
    case Algorithm::MmwumWf: {
      WfOptions o;
      o.deadline = cfg.deadline;
      return wf_sparsify(reduced, eps, o);
    }
    case Algorithm::MmwumBlock: {
      BlockOptions o;
      o.deadline = cfg.deadline;
      return block_sparsify(reduced, eps, o);
    }
    case Algorithm::AwSample:
      return aw_sample(reduced, eps, cfg.seed, cfg.deadline);
    case Algorithm::Pe: {
      PeOptions o;
      o.T = cfg.pe_retry ? std::optional<std::size_t>(resolve_pe_T(reduced, eps, cfg.pe_T)) : cfg.pe_T;
      o.deadline = cfg.deadline;
      return pe_sparsify(reduced, eps, o);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm");
}

/// Accuracy at which `a` must run so that rescaling by 1/lambda_min yields a
/// (1+eps) sandwich: bss guarantees the ratio ((2+e)/(2-e))^2, the others
/// the window [1-e, 1+e].
inline double inner_eps(Algorithm a, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (a == Algorithm::Bss) {
    const double s = std::sqrt(1.0 + eps);
    return 2.0 * (s - 1.0) / (s + 1.0);
  }
  return eps / (2.0 + eps);
}

inline constexpr double kCertificateTol = 1e-9;

/// Scales y by 1/lambda_min of its certificate and re-certifies.
inline void normalize_lower(const ReducedInstance& reduced, SparsifierResult& result) {
  const double lmin = result.certificate.lambda_min;
  if (!(lmin > 0.0)) return;
  for (double& v : result.y) v /= lmin;
  result.certificate = certify(reduced, result.y);
}

/// B <= sum y_i B_i <= (1+eps) B, with `certificate.passed` set accordingly.
inline SparsifierResult sandwich_sparsify(const ReducedInstance& reduced, double eps, const AlgorithmConfig& cfg) {
  SparsifierResult result = run_algorithm(reduced, inner_eps(cfg.algorithm, eps), cfg);
  normalize_lower(reduced, result);
  result.certificate.passed = result.certificate.passes(eps, kCertificateTol);
  return result;
}

inline SparsifierResult sandwich_sparsify(const PsdCollection& coll, double eps, const AlgorithmConfig& cfg) {
  return sandwich_sparsify(reduce_to_identity(coll), eps, cfg);
}

}  // namespace spsum
