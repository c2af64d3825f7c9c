#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "spsum/mmwum_wf.hpp"
#include "support.hpp"

using namespace spsum;
using spsum::testing::Gen;

TEST(WfParams, Schedule) {
  const WfParams p = wf_params(2, 0.5);
  EXPECT_DOUBLE_EQ(p.eta, 0.25);
  EXPECT_DOUBLE_EQ(p.delta_U, 0.125);
  EXPECT_DOUBLE_EQ(p.delta_L, 0.25 / (1.25 * 2.0));
  EXPECT_DOUBLE_EQ(p.gamma, 0.125);
  EXPECT_EQ(p.T, 23u);  // ceil(2 ln 2 / 0.0625) = ceil(22.18)
  EXPECT_EQ(wf_params(1, 0.5).T, 1u);
}

TEST(WfParams, PropertyDeltaRelation) {
  for (double eps = 0.02; eps < 1.0; eps += 0.05) {
    for (std::size_t n : {1u, 3u, 10u, 40u}) {
      const WfParams p = wf_params(n, eps);
      const double lhs = 1.0 / p.delta_L - static_cast<double>(n);
      EXPECT_NEAR(lhs, 1.0 / p.delta_U, 1e-9 * (1.0 / p.delta_U));
    }
  }
}

TEST(WfOracle, ScalarExample) {
  const ReducedInstance r = make_isotropic({SymMatrix::identity(1)});
  WfParams p;
  p.n = 1;
  p.delta_L = 0.5;
  p.delta_U = 1.0;
  p.gamma = 1.0;
  const WfStep s = wf_oracle(SymMatrix::identity(1), SymMatrix::identity(1), r, p);
  EXPECT_EQ(s.j, 0u);
  EXPECT_NEAR(s.alpha, std::log(2.0), 1e-15);
}

TEST(WfOracle, SymmetricTie) {
  const std::size_t n = 4;
  const ReducedInstance r = make_isotropic(spsum::testing::identity_split(n));
  const WfParams p = wf_params(n, 0.5);
  const SymMatrix x = (1.0 / n) * SymMatrix::identity(n);
  EXPECT_EQ(wf_oracle(x, x, r, p).j, 0u);
}

TEST(WfOracle, RejectsBadInputs) {
  const ReducedInstance r = make_isotropic(spsum::testing::identity_split(2));
  const WfParams p = wf_params(2, 0.5);
  EXPECT_THROW(wf_oracle(SymMatrix::identity(2), 0.5 * SymMatrix::identity(2), r, p), Error);
  EXPECT_THROW(wf_oracle(SymMatrix::diagonal({1.0, 0.0}), SymMatrix::diagonal({1.0, 0.0}), r, p), Error);
}

TEST(WfOracle, PropertyBothOracleInequalitiesHold) {
  // exp(gamma alpha tr C) <= ... written as the two inequalities:
  //   <X_U, C> (e^{gamma alpha tr C} - 1) / tr C <= delta_U   (equality)
  //   <X_L, C> (1 - e^{-gamma alpha tr C}) / tr C >= delta_L
  Gen g(19);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = g.index(2, 6);
    const PsdCollection c(n, spsum::testing::random_collection(g, n, 4 * n, 2));
    const ReducedInstance r = reduce_to_identity(c);
    const WfParams p = wf_params(r.rank, 0.5);
    const SymMatrix a = spsum::testing::random_psd(g, r.rank, r.rank);
    const Spectrum s = eigh(p.gamma * a);
    const SymMatrix xu = normalized_exp_weight(s, +1.0);
    const SymMatrix xl = normalized_exp_weight(s, -1.0);
    const WfStep st = wf_oracle(xu, xl, r, p);
    const SymMatrix& cj = r.whitened[st.j];
    const double tr = cj.trace();
    const double grow = std::expm1(p.gamma * st.alpha * tr) / tr;
    const double shrink = -std::expm1(-p.gamma * st.alpha * tr) / tr;
    EXPECT_GE(st.alpha, 0.0);
    EXPECT_NEAR(trace_inner(xu, cj) * grow, p.delta_U, 1e-12);
    EXPECT_GE(trace_inner(xl, cj) * shrink, p.delta_L * (1 - 1e-12));
    EXPECT_GE(trace_inner(xl, cj) / p.delta_L - tr, trace_inner(xu, cj) / p.delta_U - 1e-12);
  }
}

TEST(Psi, Examples) {
  EXPECT_NEAR(psi_upper(SymMatrix(3), 0.0, 0.7), 3.0, 1e-15);
  EXPECT_NEAR(psi_upper(SymMatrix(4), std::log(2.0), 1.0), 2.0, 1e-15);
  EXPECT_NEAR(psi_lower(SymMatrix(2), 1.0, 1.0), 2.0 * std::exp(1.0), 1e-14);
}

TEST(Equivalence, Examples) {
  const ReducedInstance r = make_isotropic(spsum::testing::identity_split(2));
  const WfParams p = wf_params(2, 0.5);
  const SymMatrix half = 0.5 * SymMatrix::identity(2);
  const WfStep st = wf_oracle(half, half, r, p);
  const SymMatrix a(2);
  EXPECT_TRUE(check_potential_equivalence(a, r.whitened[st.j], st.alpha, 0, p));
  // a zero step cannot shrink the lower potential
  EXPECT_FALSE(check_potential_equivalence(a, r.whitened[st.j], 0.0, 0, p));
  // a huge step blows up the upper one
  EXPECT_FALSE(check_potential_equivalence(a, SymMatrix::identity(2), 1e6, 0, p));
  EXPECT_THROW(check_potential_equivalence(a, SymMatrix::identity(2), -1.0, 0, p), Error);
}

TEST(WfSparsify, IdentitySplit) {
  const ReducedInstance r = make_isotropic(spsum::testing::identity_split(2));
  const SparsifierResult res = wf_sparsify(r, 0.5);
  EXPECT_LE(res.certificate.support_size, 23u);
  EXPECT_GE(res.certificate.lambda_min, 0.5 - 1e-6);
  EXPECT_LE(res.certificate.lambda_max, 1.5 + 1e-6);
}

TEST(WfSparsify, SingleMember) {
  const ReducedInstance r = make_isotropic({SymMatrix::identity(3)});
  const SparsifierResult res = wf_sparsify(r, 0.3);
  EXPECT_NEAR(res.certificate.lambda_min, res.certificate.lambda_max, 1e-12);
  EXPECT_TRUE(res.certificate.within_window(0.3, 1e-6));
}

TEST(WfSparsify, PotentialChainEquivalenceAndWidthFreeBound) {
  Gen g(4242);
  const std::size_t n = 6;
  const PsdCollection c(n, spsum::testing::random_collection(g, n, 60, 3));
  const ReducedInstance r = reduce_to_identity(c);
  const WfParams p = wf_params(r.rank, 0.5);
  WfOptions opt;
  opt.check_equivalence = true;
  std::size_t steps = 0;
  opt.observer = [&](const WfIterate& it) {
    ++steps;
    EXPECT_LE(it.log_phi_upper, it.log_phi_upper_prev + std::log1p(p.delta_U) + 1e-12);
    EXPECT_LE(it.log_phi_lower, it.log_phi_lower_prev + std::log1p(-p.delta_L) + 1e-12);
    ASSERT_TRUE(it.equivalence.has_value());
    EXPECT_TRUE(*it.equivalence);
  };
  const SparsifierResult res = wf_sparsify(r, 0.5, opt);
  EXPECT_EQ(steps, p.T);
  EXPECT_LE(res.certificate.support_size, p.T);
  EXPECT_TRUE(res.certificate.within_window(0.5, 1e-6));
  const auto [lo, hi] = wf_average_bounds(p);
  EXPECT_LE(res.certificate.lambda_max, hi + 1e-9);
  EXPECT_GE(res.certificate.lambda_min, lo - 1e-9);
  // independent eigenvalue oracle in the original coordinates
  const auto ext = spsum::testing::generalized_extremes(c.weighted_sum(res.y), c.sum());
  EXPECT_NEAR(ext[0], res.certificate.lambda_min, 1e-8);
  EXPECT_NEAR(ext[1], res.certificate.lambda_max, 1e-8);
}

TEST(WfSparsify, GammaInvariance) {
  Gen g(99);
  const PsdCollection c(5, spsum::testing::random_collection(g, 5, 30, 2));
  const ReducedInstance r = reduce_to_identity(c);
  const WfParams p = wf_params(r.rank, 0.5);
  std::vector<std::size_t> seq_a, seq_b;
  WfOptions oa, ob;
  oa.observer = [&](const WfIterate& it) { seq_a.push_back(it.j); };
  ob.observer = [&](const WfIterate& it) { seq_b.push_back(it.j); };
  ob.gamma = 10.0 * p.gamma;
  const SparsifierResult a = wf_sparsify(r, 0.5, oa);
  const SparsifierResult b = wf_sparsify(r, 0.5, ob);
  EXPECT_EQ(seq_a, seq_b);
  for (std::size_t i = 0; i < a.y.size(); ++i) EXPECT_NEAR(a.y[i], b.y[i], 1e-9 * std::max(1.0, a.y[i]));
}
