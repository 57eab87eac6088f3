#include "latentlob/propagator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "latentlob/accumulators.hpp"

using namespace latentlob;

TEST(Propagator, ZeroBiasZeroImpact) {
  auto spec = PropagatorSpec::parametric(0.25, 0.5, 0.0, 200);
  for (int64_t t : {1, 10, 100, 200}) EXPECT_DOUBLE_EQ(prop_impact(spec, t).total, 0.0);
}

TEST(Propagator, ConstantKernelExact) {
  std::vector<double> kernel(101, 0.7);
  kernel[0] = 0.0;
  // unbiased iid flow: variance = G0^2 t exactly
  auto spec0 = PropagatorSpec::iid(kernel, 0.0);
  for (int64_t t : {1, 7, 50, 100}) {
    EXPECT_DOUBLE_EQ(prop_impact(spec0, t).total, 0.0);
    EXPECT_NEAR(prop_variance(spec0, t), 0.49 * static_cast<double>(t), 1e-12);
  }
  // biased flow: impact phi*G0*t; the variance-consistent g_0 gives
  // (1 - phi^2) G0^2 t, the exact variance of a +-1 flow with mean phi
  auto spec = PropagatorSpec::iid(kernel, 0.3);
  for (int64_t t : {1, 7, 50, 100}) {
    EXPECT_NEAR(prop_impact(spec, t).total, 0.3 * 0.7 * static_cast<double>(t), 1e-12);
    EXPECT_NEAR(prop_variance(spec, t), (1.0 - 0.09) * 0.49 * static_cast<double>(t), 1e-12);
  }
}

TEST(Propagator, SplitRecombinesExactly) {
  std::vector<double> kernel(201);
  kernel[0] = 0.0;
  for (size_t k = 1; k < kernel.size(); ++k)
    kernel[k] = 0.2 + std::pow(static_cast<double>(k), -0.3);
  auto spec = PropagatorSpec::iid(kernel, 0.25);
  spec.g_infinity = 0.2;
  for (int64_t t : {1, 10, 100, 200}) {
    const PropImpact pi = prop_impact(spec, t);
    EXPECT_NEAR(pi.linear + pi.transient, pi.total, 1e-12 * std::max(1.0, std::fabs(pi.total)));
    EXPECT_GT(pi.linear, 0.0);
  }
}

TEST(Propagator, ImpactLinearInParticipation) {
  auto s1 = PropagatorSpec::parametric(0.25, 0.5, 0.1, 300);
  auto s2 = PropagatorSpec::parametric(0.25, 0.5, 0.2, 300);
  for (int64_t t : {10, 100, 300})
    EXPECT_NEAR(2.0 * prop_impact(s1, t).total, prop_impact(s2, t).total, 1e-12);
}

TEST(Propagator, HorizonChecked) {
  auto spec = PropagatorSpec::parametric(0.25, 0.5, 0.1, 50);
  EXPECT_THROW(prop_impact(spec, 51), std::runtime_error);
  EXPECT_THROW(prop_variance(spec, 51), std::runtime_error);
}

// Monte Carlo cross-check with exactly known sign statistics (iid).
TEST(Propagator, McMatchesAnalyticIid) {
  std::vector<double> kernel(1001);
  kernel[0] = 0.0;
  for (size_t k = 1; k < kernel.size(); ++k)
    kernel[k] = std::pow(1.0 + static_cast<double>(k), -0.25);
  auto spec = PropagatorSpec::iid(kernel, 0.15);
  const std::vector<int64_t> lags = {1, 3, 10, 32, 100, 316, 1000};
  const PropMcResult mc = prop_monte_carlo(spec, lags, 10000, SignMode::IID, nullptr, 99);
  for (size_t k = 0; k < lags.size(); ++k) {
    const double ia = prop_impact(spec, lags[k]).total;
    const double va = prop_variance(spec, lags[k]);
    EXPECT_NEAR(mc.mean[k], ia, 3.5 * mc.mean_se[k]) << "t=" << lags[k];
    EXPECT_NEAR(mc.var[k], va, 3.5 * mc.var_se[k]) << "t=" << lags[k];
  }
}

// Monte Carlo cross-check with the correlated stream and a measured g table.
TEST(Propagator, McMatchesAnalyticLmf) {
  const double gamma = 0.5;
  auto table = std::make_shared<TrendTable>(gamma);
  auto spec = PropagatorSpec::parametric(0.25, gamma, 0.15, 400);
  spec.set_measured_background_corr(measure_sign_corr(SignMode::LMF, table, 400, 20000000, 12345));
  const std::vector<int64_t> lags = {1, 10, 50, 150, 400};
  const PropMcResult mc = prop_monte_carlo(spec, lags, 8000, SignMode::LMF, table, 77);
  for (size_t k = 0; k < lags.size(); ++k) {
    const double ia = prop_impact(spec, lags[k]).total;
    const double va = prop_variance(spec, lags[k]);
    EXPECT_NEAR(mc.mean[k], ia, 3.5 * mc.mean_se[k]) << "t=" << lags[k];
    EXPECT_NEAR(mc.var[k], va, 3.5 * mc.var_se[k] + 0.02 * va) << "t=" << lags[k];
  }
}

// Away from the diffusive tuning beta=(1-gamma)/2 the rescaled variance
// drifts monotonically.
TEST(Propagator, OffDiffusiveKernelDrifts) {
  auto spec = PropagatorSpec::parametric(0.10, 0.5, 0.0, 1000);
  const auto lags = log_lag_grid(1000, 4);
  double prev = 0;
  bool monotone = true;
  bool first = true;
  for (int64_t t : lags) {
    if (t < 100) continue;
    const double v = prop_variance(spec, t) / static_cast<double>(t);
    if (!first && v <= prev) monotone = false;
    prev = v;
    first = false;
  }
  EXPECT_TRUE(monotone);
  // and the drift is large: more than 60% across the decade
  const double v100 = prop_variance(spec, 100) / 100.0;
  const double v1000 = prop_variance(spec, 1000) / 1000.0;
  EXPECT_GT(v1000 / v100, 1.6);
}
