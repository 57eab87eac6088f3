#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "latentlob/flow.hpp"
#include "latentlob/rng.hpp"

namespace latentlob {

/// Linear propagator model: p_t = p_0 + sum_{t'<t} G_{t-t'} eps_{t'} with a
/// biased, long-range-correlated sign flow. Serves as an independent
/// analytic + Monte Carlo oracle for impact and diffusion.
struct PropagatorSpec {
  std::vector<double> kernel;  // G_1..G_H (index 0 unused)
  double g_infinity = 0.0;     // permanent component of the kernel
  double phi_tilde = 0.0;      // participation rate of the bias
  std::vector<double> sign_corr;  // g_0..g_H; g_0 is the sign variance
  int64_t horizon = 0;

  /// g_0 is pinned by the sign variance: a +-1 flow with mean phi~ has
  /// Var(eps) = 1 - phi~^2, and the covariance convention scales lagged
  /// correlations by (1-phi~)^2, so g_0 = (1+phi~)/(1-phi~).
  static double g0_for(double phi_tilde) { return (1.0 + phi_tilde) / (1.0 - phi_tilde); }

  /// Parametric kernel G_t = g0 * (t0 + t)^-beta, t = 1..horizon, with
  /// lagged sign correlations |d|^-gamma.
  static PropagatorSpec parametric(double beta, double gamma, double phi_tilde, int64_t horizon,
                                   double g0 = 1.0, double t0 = 1.0) {
    PropagatorSpec s;
    s.horizon = horizon;
    s.phi_tilde = phi_tilde;
    s.kernel.resize(static_cast<size_t>(horizon) + 1, 0.0);
    for (int64_t t = 1; t <= horizon; ++t)
      s.kernel[static_cast<size_t>(t)] = g0 * std::pow(t0 + static_cast<double>(t), -beta);
    s.sign_corr.resize(static_cast<size_t>(horizon) + 1, 0.0);
    s.sign_corr[0] = g0_for(phi_tilde);
    for (int64_t d = 1; d <= horizon; ++d)
      s.sign_corr[static_cast<size_t>(d)] = std::pow(static_cast<double>(d), -gamma);
    return s;
  }

  /// i.i.d. background signs: g_d = 0 for d >= 1.
  static PropagatorSpec iid(std::vector<double> kernel_1_based, double phi_tilde) {
    PropagatorSpec s;
    s.kernel = std::move(kernel_1_based);
    s.horizon = static_cast<int64_t>(s.kernel.size()) - 1;
    s.phi_tilde = phi_tilde;
    s.sign_corr.assign(s.kernel.size(), 0.0);
    s.sign_corr[0] = g0_for(phi_tilde);
    return s;
  }

  /// Install a measured background correlation table (g_0 = 1 convention,
  /// as returned by measure_sign_corr); the lag-0 entry is replaced by the
  /// variance-consistent value for the biased flow.
  void set_measured_background_corr(std::vector<double> g) {
    sign_corr = std::move(g);
    sign_corr[0] = g0_for(phi_tilde);
  }

  void check(int64_t t) const {
    if (t < 0 || t > horizon) throw std::runtime_error("propagator: t beyond horizon");
  }
};

struct PropImpact {
  double total = 0.0;
  double linear = 0.0;     // phi~ * G_inf * t
  double transient = 0.0;  // phi~ * sum (G_k - G_inf)
};

/// Expected price change after t trades of biased flow, split into the
/// permanent (linear) and transient parts; the parts recombine exactly.
inline PropImpact prop_impact(const PropagatorSpec& spec, int64_t t) {
  spec.check(t);
  PropImpact out;
  double sum = 0.0, sum_excess = 0.0;
  for (int64_t k = 1; k <= t; ++k) {
    sum += spec.kernel[static_cast<size_t>(k)];
    sum_excess += spec.kernel[static_cast<size_t>(k)] - spec.g_infinity;
  }
  out.total = spec.phi_tilde * sum;
  out.linear = spec.phi_tilde * spec.g_infinity * static_cast<double>(t);
  out.transient = spec.phi_tilde * sum_excess;
  return out;
}

/// Variance of the price change after t trades, by direct double summation:
/// (1-phi~)^2 sum_{a,b=1..t} G_a G_b g_{|a-b|}.
inline double prop_variance(const PropagatorSpec& spec, int64_t t) {
  spec.check(t);
  const double w = (1.0 - spec.phi_tilde) * (1.0 - spec.phi_tilde);
  double acc = 0.0;
  for (int64_t a = 1; a <= t; ++a) {
    const double ga = spec.kernel[static_cast<size_t>(a)];
    acc += ga * ga * spec.sign_corr[0];
    double cross = 0.0;
    for (int64_t b = a + 1; b <= t; ++b)
      cross += spec.kernel[static_cast<size_t>(b)] * spec.sign_corr[static_cast<size_t>(b - a)];
    acc += 2.0 * ga * cross;
  }
  return w * acc;
}

struct PropMcResult {
  std::vector<int64_t> t;
  std::vector<double> mean, mean_se;
  std::vector<double> var, var_se;
  uint64_t paths = 0;
};

/// Direct path simulation of the propagator price process at the requested
/// lags. Background signs come from the given stream mode (LMF generator for
/// correlated flow); the meta bias is an independent Bernoulli(phi~) overlay,
/// matching the biased-flow sign statistics exactly.
inline PropMcResult prop_monte_carlo(const PropagatorSpec& spec, const std::vector<int64_t>& lags,
                                     uint64_t paths, SignMode mode,
                                     std::shared_ptr<const TrendTable> table, uint64_t seed) {
  PropMcResult res;
  res.t = lags;
  res.paths = paths;
  const size_t nl = lags.size();
  std::vector<double> s1(nl, 0.0), s2(nl, 0.0);
  int64_t tmax = 0;
  for (int64_t t : lags) {
    spec.check(t);
    tmax = std::max(tmax, t);
  }
  std::vector<int8_t> eps(static_cast<size_t>(tmax));
  for (uint64_t p = 0; p < paths; ++p) {
    Rng rng(seed, p);
    SignStream bg = mode == SignMode::LMF ? SignStream::lmf(table) : SignStream::iid();
    for (auto& e : eps) {
      // background advances every step and the bias overrides it, so the
      // covariance keeps the exact (1-phi~)^2 g_{t-t'} structure
      const int eta = bg.next(rng);
      e = static_cast<int8_t>(rng.bernoulli(spec.phi_tilde) ? 1 : eta);
    }
    for (size_t k = 0; k < nl; ++k) {
      const int64_t t = lags[k];
      double pt = 0.0;
      for (int64_t tp = 0; tp < t; ++tp)
        pt += spec.kernel[static_cast<size_t>(t - tp)] * static_cast<double>(eps[static_cast<size_t>(tp)]);
      s1[k] += pt;
      s2[k] += pt * pt;
    }
  }
  res.mean.resize(nl);
  res.mean_se.resize(nl);
  res.var.resize(nl);
  res.var_se.resize(nl);
  const double n = static_cast<double>(paths);
  for (size_t k = 0; k < nl; ++k) {
    res.mean[k] = s1[k] / n;
    const double var = std::max(s2[k] / n - res.mean[k] * res.mean[k], 0.0);
    res.var[k] = var;
    res.mean_se[k] = std::sqrt(var / n);
    // normal-theory error on a sample variance: var * sqrt(2/(n-1))
    res.var_se[k] = var * std::sqrt(2.0 / (n - 1.0));
  }
  return res;
}

/// Empirical sign-correlation table g_0..g_max, ensemble-averaged over many
/// independent equilibrium-started streams. A single long stream is a poor
/// estimator here (the correlation of the products decays as slowly as the
/// signal), so independent replicas are both cheaper and unbiased.
inline std::vector<double> measure_sign_corr(SignMode mode, std::shared_ptr<const TrendTable> table,
                                             int64_t max_lag, uint64_t total_draws, uint64_t seed) {
  const auto len = static_cast<size_t>(2 * max_lag + 1);
  const uint64_t n_streams = std::max<uint64_t>(total_draws / len, 64);
  const size_t anchor_stride = static_cast<size_t>(std::max<int64_t>(max_lag / 4, 1));
  std::vector<double> sum(static_cast<size_t>(max_lag) + 1, 0.0);
  std::vector<uint64_t> cnt(static_cast<size_t>(max_lag) + 1, 0);
  std::vector<int8_t> sig(len);
  for (uint64_t p = 0; p < n_streams; ++p) {
    Rng rng(seed, p);
    SignStream s = mode == SignMode::LMF ? SignStream::lmf(table) : SignStream::iid();
    for (auto& v : sig) v = static_cast<int8_t>(s.next(rng));
    for (size_t a = 0; a + 1 < len; a += anchor_stride) {
      const int64_t dmax = std::min<int64_t>(max_lag, static_cast<int64_t>(len - 1 - a));
      for (int64_t d = 1; d <= dmax; ++d) {
        sum[static_cast<size_t>(d)] += sig[a] * sig[a + static_cast<size_t>(d)];
        cnt[static_cast<size_t>(d)] += 1;
      }
    }
  }
  std::vector<double> g(static_cast<size_t>(max_lag) + 1, 1.0);
  for (int64_t d = 1; d <= max_lag; ++d)
    g[static_cast<size_t>(d)] = sum[static_cast<size_t>(d)] / static_cast<double>(cnt[static_cast<size_t>(d)]);
  return g;
}

}  // namespace latentlob
