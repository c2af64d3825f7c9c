#pragma once

// Without positive semidefiniteness no sparse reweighting exists: the
// collection {2I} u {E_ij = e_i e_j^T + e_j e_i^T : i < j} sums to I + J, and
// any y that approximates I + J must keep every E_ij.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spsum/error.hpp"
#include "spsum/sym_matrix.hpp"

namespace spsum {

/// Member 0 is 2I; the E_ij follow in lexicographic (i, j) order.
inline std::vector<SymMatrix> psd_counterexample(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
  std::vector<SymMatrix> out;
  out.reserve(1 + n * (n - 1) / 2);
  out.push_back(2.0 * SymMatrix::identity(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      SymMatrix e(n);
      e.set(i, j, 1.0);
      out.push_back(std::move(e));
    }
  }
  return out;
}

/// Position of E_ab (a < b) in psd_counterexample(n).
inline std::size_t counterexample_index(std::size_t n, std::size_t a, std::size_t b) {
  if (a >= b || b >= n) throw Error(ErrorCode::InvalidArgument, "need a < b < n");
  return 1 + a * n - a * (a + 1) / 2 + (b - a - 1);
}

/// <sum_i y_i B_i - (1-eps) B, E_ab> for the counterexample collection.
/// Equals 2 y_ab - 2(1-eps), so it is negative whenever y_ab = 0.
inline double counterexample_inner_product(std::size_t n, std::span<const double> y, double eps, std::size_t a,
                                           std::size_t b) {
  const std::vector<SymMatrix> mats = psd_counterexample(n);
  if (y.size() != mats.size()) throw Error(ErrorCode::DimMismatch, "y has the wrong length");
  SymMatrix diff(n);
  SymMatrix total(n);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    diff.add_scaled(mats[i], y[i]);
    total += mats[i];
  }
  diff.add_scaled(total, -(1.0 - eps));
  return trace_inner(diff, mats[counterexample_index(n, a, b)]);
}

}  // namespace spsum
