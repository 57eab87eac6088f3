#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "latentlob/accumulators.hpp"
#include "latentlob/config.hpp"
#include "latentlob/fit.hpp"
#include "latentlob/flow.hpp"

namespace latentlob {

struct SignatureRow {
  int64_t t = 0;
  double d = 0.0;       // D(t) = <(p(t0+t)-p(t0))^2>
  double sigma2 = 0.0;  // D(t)/t
  double stderr_d = 0.0;
  uint64_t n = 0;
};

/// Per-lag variogram estimates. The averaging windows overlap, so the
/// standard error uses n_eff = n/lag independent-sample equivalents.
inline std::vector<SignatureRow> signature(const VariogramAcc& acc) {
  std::vector<SignatureRow> rows;
  for (size_t k = 0; k < acc.lags.size(); ++k) {
    if (acc.n[k] == 0) continue;
    SignatureRow r;
    r.t = acc.lags[k];
    r.n = acc.n[k];
    const double nn = static_cast<double>(acc.n[k]);
    r.d = acc.sum[k] / nn;
    const double var = std::max(acc.sum2[k] / nn - r.d * r.d, 0.0);
    const double n_eff = std::max(nn / static_cast<double>(acc.lags[k]), 1.0);
    r.stderr_d = std::sqrt(var / n_eff);
    r.sigma2 = r.d / static_cast<double>(r.t);
    rows.push_back(r);
  }
  return rows;
}

inline const SignatureRow* find_lag(const std::vector<SignatureRow>& rows, int64_t t) {
  for (const auto& r : rows)
    if (r.t == t) return &r;
  return nullptr;
}

/// Diffusion phase statistic S = ln[ D(10^3) / (100 * D(10^1)) ]; zero for a
/// perfectly diffusive price, positive super-diffusive, negative confined.
struct PhaseStat {
  double s = 0.0;
  double stderr_s = 0.0;
};

inline PhaseStat phase_statistic(const std::vector<SignatureRow>& rows) {
  const SignatureRow* lo = find_lag(rows, 10);
  const SignatureRow* hi = find_lag(rows, 1000);
  if (!lo || !hi || !(lo->d > 0) || !(hi->d > 0))
    throw std::runtime_error("phase statistic needs D(10) and D(1000)");
  PhaseStat p;
  p.s = std::log(hi->d / (100.0 * lo->d));
  const double rlo = lo->stderr_d / lo->d;
  const double rhi = hi->stderr_d / hi->d;
  p.stderr_s = std::sqrt(rlo * rlo + rhi * rhi);
  return p;
}

inline PhaseStat phase_statistic(const VariogramAcc& acc) { return phase_statistic(signature(acc)); }

struct HurstFit {
  double h = 0.0;
  double stderr_h = 0.0;
  size_t n_points = 0;
  size_t n_excluded = 0;
  bool ok = false;
};

/// Weighted log-log fit of D(t) ~ t^(2H) over lags in [t_lo, t_hi].
inline HurstFit hurst_fit(const std::vector<SignatureRow>& rows, int64_t t_lo, int64_t t_hi) {
  std::vector<double> t, d, se;
  for (const auto& r : rows) {
    if (r.t < t_lo || r.t > t_hi) continue;
    t.push_back(static_cast<double>(r.t));
    d.push_back(r.d);
    se.push_back(r.stderr_d);
  }
  const LinearFit f = wls_loglog(t, d, se);
  HurstFit h;
  h.ok = f.ok;
  h.h = f.slope / 2.0;
  h.stderr_h = f.slope_se / 2.0;
  h.n_points = f.n_used;
  h.n_excluded = f.n_excluded;
  return h;
}

inline HurstFit hurst_fit(const VariogramAcc& acc, int64_t t_lo, int64_t t_hi) {
  return hurst_fit(signature(acc), t_lo, t_hi);
}

struct ConfinedFit {
  double sigma2_inf = 0.0;
  double c = 0.0;
  double r2 = 0.0;
  bool ok = false;
};

/// Fit of the confined law sigma^2_t = sigma^2_inf - c/sqrt(t), linear WLS in
/// x = t^(-1/2).
inline ConfinedFit confined_fit(const std::vector<SignatureRow>& rows, int64_t t_lo, int64_t t_hi) {
  std::vector<double> x, y, w;
  for (const auto& r : rows) {
    if (r.t < t_lo || r.t > t_hi || r.n == 0) continue;
    x.push_back(1.0 / std::sqrt(static_cast<double>(r.t)));
    y.push_back(r.sigma2);
    const double se = r.stderr_d / static_cast<double>(r.t);
    w.push_back(se > 0 ? 1.0 / (se * se) : 0.0);
  }
  double wmax = 0;
  for (double v : w) wmax = std::max(wmax, v);
  for (double& v : w)
    if (v == 0) v = wmax > 0 ? wmax : 1.0;
  const LinearFit f = wls_linear(x, y, w);
  ConfinedFit c;
  c.ok = f.ok;
  c.sigma2_inf = f.intercept;
  c.c = -f.slope;
  c.r2 = f.r2;
  return c;
}

struct ImpactRow {
  int64_t q = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  uint64_t n = 0;
};

inline std::vector<ImpactRow> impact_table(const ImpactAcc& acc) {
  std::vector<ImpactRow> rows;
  for (size_t k = 0; k < acc.q_grid.size(); ++k) {
    if (acc.n[k] == 0) continue;
    ImpactRow r;
    r.q = acc.q_grid[k];
    r.n = acc.n[k];
    const double nn = static_cast<double>(acc.n[k]);
    r.mean = acc.sum[k] / nn;
    const double var = std::max(acc.sum2[k] / nn - r.mean * r.mean, 0.0);
    r.stderr_mean = std::sqrt(var / nn);
    rows.push_back(r);
  }
  return rows;
}

struct ImpactFit {
  double delta = 0.0;
  double stderr_delta = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  size_t n_points = 0;
  size_t n_excluded = 0;
  bool ok = false;
};

/// Log-log fit I(Q) = A * Q^delta over mean impacts with positive means.
inline ImpactFit impact_fit(const std::vector<ImpactRow>& rows, int64_t q_lo, int64_t q_hi) {
  std::vector<double> q, i, se;
  for (const auto& r : rows) {
    if (r.q < q_lo || r.q > q_hi) continue;
    q.push_back(static_cast<double>(r.q));
    i.push_back(r.mean);
    se.push_back(r.stderr_mean);
  }
  const LinearFit f = wls_loglog(q, i, se);
  ImpactFit out;
  out.ok = f.ok;
  out.delta = f.slope;
  out.stderr_delta = f.slope_se;
  out.prefactor = std::exp(f.intercept);
  out.r2 = f.r2;
  out.n_points = f.n_used;
  out.n_excluded = f.n_excluded;
  return out;
}

inline ImpactFit impact_fit(const ImpactAcc& acc, int64_t q_lo, int64_t q_hi) {
  return impact_fit(impact_table(acc), q_lo, q_hi);
}

struct DecayRow {
  int64_t t = 0;  // trades after completion
  double i = 0.0; // I_{T+t}
  double stderr_i = 0.0;
  uint64_t n = 0;
};

struct DecayCurve {
  std::vector<DecayRow> rows;
  double i_end = 0.0;         // I_T
  double i_end_stderr = 0.0;
  double theta = 0.0;         // early-time fit I_T - I_{T+t} ~ t^theta
  double theta_stderr = 0.0;
  bool theta_ok = false;
  double plateau = 0.0;       // late-time impact level
  double plateau_stderr = 0.0;
};

inline DecayCurve decay_curve(const DecayAcc& acc, int64_t early_max = 32) {
  DecayCurve out;
  if (acc.n_traj > 0) {
    const double nn = static_cast<double>(acc.n_traj);
    out.i_end = acc.i_end_sum / nn;
    const double var = std::max(acc.i_end_sum2 / nn - out.i_end * out.i_end, 0.0);
    out.i_end_stderr = std::sqrt(var / nn);
  }
  for (size_t k = 0; k < acc.sum.size(); ++k) {
    if (acc.n[k] == 0) continue;
    DecayRow r;
    r.t = static_cast<int64_t>(k) + 1;
    r.n = acc.n[k];
    const double nn = static_cast<double>(acc.n[k]);
    r.i = acc.sum[k] / nn;
    const double var = std::max(acc.sum2[k] / nn - r.i * r.i, 0.0);
    r.stderr_i = std::sqrt(var / nn);
    out.rows.push_back(r);
  }
  // early-time relaxation exponent
  std::vector<double> t, y, se;
  for (const auto& r : out.rows) {
    if (r.t > early_max) break;
    const double drop = out.i_end - r.i;
    t.push_back(static_cast<double>(r.t));
    y.push_back(drop);
    se.push_back(std::sqrt(r.stderr_i * r.stderr_i + out.i_end_stderr * out.i_end_stderr));
  }
  const LinearFit f = wls_loglog(t, y, se);
  out.theta_ok = f.ok;
  out.theta = f.slope;
  out.theta_stderr = f.slope_se;
  // plateau: average of the last quarter of the recorded horizon
  if (!out.rows.empty()) {
    const size_t k0 = out.rows.size() - std::max<size_t>(out.rows.size() / 4, 1);
    double s = 0, s2 = 0;
    size_t m = 0;
    for (size_t k = k0; k < out.rows.size(); ++k) {
      s += out.rows[k].i;
      s2 += out.rows[k].stderr_i * out.rows[k].stderr_i;
      ++m;
    }
    out.plateau = s / static_cast<double>(m);
    // lags are strongly correlated across t; use the mean per-lag error
    out.plateau_stderr = std::sqrt(s2 / static_cast<double>(m));
  }
  return out;
}

struct ProfileRow {
  int64_t offset = 0;  // signed ticks from mid; negative = bid side
  double mean = 0.0;
  double stderr_mean = 0.0;
  double mean_field = 0.0;
  uint64_t n = 0;
};

/// Mean-field overlay: rho(p) = (lambda w/nu)(1 - exp(-|p|/p*)) against the
/// measured shape, with p* = sqrt(D/2nu) and D measured in-run (no free
/// parameter).
struct ProfileCompare {
  double pstar = 0.0;         // $ units
  double depth = 0.0;         // lambda w / nu, units per level
  std::vector<ProfileRow> rows;
};

inline ProfileCompare profile_compare(const ProfileAcc& acc, const ExperimentConfig& cfg,
                                      double d_price_per_s) {
  ProfileCompare out;
  out.pstar = std::sqrt(d_price_per_s / (2.0 * cfg.nu));
  out.depth = cfg.depth_mean();
  auto emit = [&](int64_t off, double sum, double sum2, uint64_t n) {
    if (n == 0) return;
    ProfileRow r;
    r.offset = off;
    r.n = n;
    const double nn = static_cast<double>(n);
    r.mean = sum / nn;
    const double var = std::max(sum2 / nn - r.mean * r.mean, 0.0);
    r.stderr_mean = std::sqrt(var / nn);
    const double p = std::abs(static_cast<double>(off)) * cfg.tick;
    r.mean_field = out.depth * (1.0 - std::exp(-p / out.pstar));
    out.rows.push_back(r);
  };
  for (int64_t d = acc.halfwidth; d >= 1; --d)
    emit(-d, acc.sum_bid[static_cast<size_t>(d - 1)], acc.sum2_bid[static_cast<size_t>(d - 1)],
         acc.n_bid[static_cast<size_t>(d - 1)]);
  for (int64_t d = 1; d <= acc.halfwidth; ++d)
    emit(d, acc.sum_ask[static_cast<size_t>(d - 1)], acc.sum2_ask[static_cast<size_t>(d - 1)],
         acc.n_ask[static_cast<size_t>(d - 1)]);
  return out;
}

/// Relative deviation measured/mean-field per geometric band over offsets in
/// [lo_mult*p*, hi_mult*p*], both sides pooled.
struct BandDeviation {
  double band_lo = 0.0, band_hi = 0.0;  // $ offsets
  double rel_dev = 0.0;
  uint64_t n = 0;
};

inline std::vector<BandDeviation> profile_band_deviation(const ProfileCompare& pc, double tick,
                                                         double lo_mult = 0.5, double hi_mult = 3.0,
                                                         int n_bands = 6) {
  std::vector<BandDeviation> bands(static_cast<size_t>(n_bands));
  const double lo = lo_mult * pc.pstar, hi = hi_mult * pc.pstar;
  const double ratio = std::pow(hi / lo, 1.0 / n_bands);
  std::vector<double> meas(static_cast<size_t>(n_bands), 0.0), mf(static_cast<size_t>(n_bands), 0.0);
  for (int b = 0; b < n_bands; ++b) {
    bands[static_cast<size_t>(b)].band_lo = lo * std::pow(ratio, b);
    bands[static_cast<size_t>(b)].band_hi = lo * std::pow(ratio, b + 1);
  }
  for (const auto& r : pc.rows) {
    const double p = std::abs(static_cast<double>(r.offset)) * tick;
    if (p < lo || p >= hi) continue;
    const auto b = static_cast<size_t>(std::log(p / lo) / std::log(ratio));
    if (b >= bands.size()) continue;
    meas[b] += r.mean;
    mf[b] += r.mean_field;
    bands[b].n += r.n;
  }
  for (size_t b = 0; b < bands.size(); ++b)
    bands[b].rel_dev = mf[b] > 0 ? meas[b] / mf[b] - 1.0 : 0.0;
  return bands;
}

struct BestVolumeRow {
  int64_t bin_lo = 0, bin_hi = 0;
  uint64_t count = 0;
  double density = 0.0;  // count per integer volume
  double center = 0.0;   // geometric bin center
};

inline std::vector<BestVolumeRow> best_volume_histogram(const BestVolumeAcc& acc) {
  std::vector<BestVolumeRow> rows;
  for (size_t k = 0; k < acc.count.size(); ++k) {
    BestVolumeRow r;
    r.bin_lo = acc.bin_lo[k];
    r.bin_hi = acc.bin_hi[k];
    r.count = acc.count[k];
    const double width = static_cast<double>(r.bin_hi - r.bin_lo + 1);
    r.density = static_cast<double>(r.count) / width;
    r.center = std::sqrt(static_cast<double>(r.bin_lo) * static_cast<double>(r.bin_hi));
    rows.push_back(r);
  }
  return rows;
}

struct TailFit {
  double exponent = 0.0;  // density ~ v^exponent (negative)
  double stderr_exponent = 0.0;
  size_t n_points = 0;
  bool ok = false;
};

inline TailFit best_volume_tail_fit(const std::vector<BestVolumeRow>& rows, double v_lo, double v_hi) {
  std::vector<double> v, d, se;
  for (const auto& r : rows) {
    if (r.center < v_lo || r.center > v_hi || r.count < 4) continue;
    v.push_back(r.center);
    d.push_back(r.density);
    se.push_back(r.density / std::sqrt(static_cast<double>(r.count)));
  }
  TailFit out;
  if (v.size() < 3) return out;  // insufficient tail samples; fit omitted
  const LinearFit f = wls_loglog(v, d, se);
  out.ok = f.ok;
  out.exponent = f.slope;
  out.stderr_exponent = f.slope_se;
  out.n_points = f.n_used;
  return out;
}

/// Center of the high-volume probability peak (never-traded territory sits
/// near lambda w/nu): the last local maximum of the smoothed bin density.
inline std::optional<double> best_volume_peak(const std::vector<BestVolumeRow>& rows, double v_min = 8.0) {
  std::vector<double> dens(rows.size());
  for (size_t k = 0; k < rows.size(); ++k) dens[k] = rows[k].density;
  std::optional<double> peak;
  for (size_t k = 1; k + 1 < rows.size(); ++k) {
    if (rows[k].center < v_min || rows[k].count < 4) continue;
    const double s_prev = 0.5 * (dens[k - 1] + dens[k]);
    const double s_next = 0.5 * (dens[k] + dens[k + 1]);
    if (dens[k] >= s_prev && dens[k] >= s_next && dens[k] > dens[k - 1]) peak = rows[k].center;
  }
  return peak;
}

struct MarkovRow {
  int64_t t = 0;
  uint64_t n = 0, n_plus = 0, n_minus = 0;
  double pi = 0, pi_se = 0;
  double pi_plus = 0, pi_minus = 0;
  double s = 0, s_se = 0;
  double s_plus = 0, s_minus = 0;
  double dl = 0, dl_se = 0;
  double g = 0, g_se = 0;             // empirical sign autocorrelation factor
  double resid_impact = 0, resid_impact_se = 0;  // <dl> - <pi> - phi~<s>
  double resid_ac = 0, resid_ac_se = 0;          // connected AC vs theory RHS
  double id_mean = 0, id_mean_se = 0;            // <pi> - (<pi>_+ + <pi>_-)/2
  double id_spread = 0, id_spread_se = 0;        // <s>_+ - <s>_-
  double id_cross = 0, id_cross_se = 0;          // (<pi>-<pi>_+) + (<s>-<s>_+)
};

struct MarkovReport {
  double phi_tilde = 0.0;
  double s0 = 0.0, s0_se = 0.0;
  std::vector<MarkovRow> rows;
};

/// Residuals of the Markovian-book relations: the impact identity, the
/// conditional-average identities, and the sign-conditioned autocorrelation
/// equation with the empirically measured g_t.
inline MarkovReport markov_check(const MarkovAcc& acc) {
  MarkovReport rep;
  rep.phi_tilde = acc.phi_tilde;
  if (acc.s0_n > 0) {
    const double nn = static_cast<double>(acc.s0_n);
    rep.s0 = acc.s0_sum / nn;
    const double var = std::max(acc.s0_sum2 / nn - rep.s0 * rep.s0, 0.0);
    rep.s0_se = std::sqrt(var / nn);
  }
  auto mean_se = [](double sum, double sum2, uint64_t n, double& m, double& se) {
    if (n == 0) {
      m = 0;
      se = 0;
      return;
    }
    const double nn = static_cast<double>(n);
    m = sum / nn;
    se = std::sqrt(std::max(sum2 / nn - m * m, 0.0) / nn);
  };
  const double ph = acc.phi_tilde;
  // mean of dl at lag 0 for the connected autocorrelation
  double dl0_mean = 0, dl0_se = 0;
  if (!acc.n.empty()) mean_se(acc.sum_dl[0], acc.sum_dl2[0], acc.n[0], dl0_mean, dl0_se);
  double eps0_mean = acc.n.empty() || acc.n[0] == 0
                         ? 0.0
                         : acc.sum_eps[0] / static_cast<double>(acc.n[0]);

  for (int64_t t = 0; t <= acc.max_lag; ++t) {
    const auto k = static_cast<size_t>(t);
    if (acc.n[k] == 0) continue;  // lag with no samples: absent row
    MarkovRow r;
    r.t = t;
    r.n = acc.n[k];
    r.n_plus = acc.n_plus[k];
    r.n_minus = acc.n_minus[k];
    mean_se(acc.sum_pi[k], acc.sum_pi2[k], acc.n[k], r.pi, r.pi_se);
    mean_se(acc.sum_s[k], acc.sum_s2[k], acc.n[k], r.s, r.s_se);
    mean_se(acc.sum_dl[k], acc.sum_dl2[k], acc.n[k], r.dl, r.dl_se);
    double pi_p_se, pi_m_se, s_p_se, s_m_se;
    mean_se(acc.sum_pi_p[k], acc.sum_pi_p2[k], acc.n_plus[k], r.pi_plus, pi_p_se);
    mean_se(acc.sum_pi_m[k], acc.sum_pi_m2[k], acc.n_minus[k], r.pi_minus, pi_m_se);
    mean_se(acc.sum_s_p[k], acc.sum_s_p2[k], acc.n_plus[k], r.s_plus, s_p_se);
    mean_se(acc.sum_s_m[k], acc.sum_s_m2[k], acc.n_minus[k], r.s_minus, s_m_se);

    // (i) impact identity residual, accumulated per sample as x = dl-pi-ph*s
    mean_se(acc.sum_x[k], acc.sum_x2[k], acc.n[k], r.resid_impact, r.resid_impact_se);

    // empirical g_t from the composed sign process
    const double nn = static_cast<double>(acc.n[k]);
    const double eps_mean = acc.sum_eps[k] / nn;
    const double epseps0 = acc.sum_epseps0[k] / nn;
    const double cov = epseps0 - eps_mean * eps0_mean;
    const double denom = (1.0 - ph) * (1.0 - ph);
    r.g = denom > 0 ? cov / denom : 0.0;
    // var of a +-1 product is 1 - cov^2
    r.g_se = denom > 0 ? std::sqrt(std::max(1.0 - epseps0 * epseps0, 0.0) / nn) / denom : 0.0;

    // (ii) autocorrelation equation
    double acraw, acraw_se;
    mean_se(acc.sum_dldl0[k], acc.sum_dldl0_2[k], acc.n[k], acraw, acraw_se);
    const double lhs = acraw - r.dl * dl0_mean;
    const double lhs_se = std::sqrt(acraw_se * acraw_se + r.dl * r.dl * dl0_se * dl0_se +
                                    dl0_mean * dl0_mean * r.dl_se * r.dl_se);
    const double s_cond_avg = 0.5 * (r.s_plus + r.s_minus);
    const double pi_diff = 0.5 * (r.pi_plus - r.pi_minus);
    const double rhs = rep.s0 * ((1.0 - ph * ph) * pi_diff +
                                 (1.0 - ph) * (1.0 - ph) * s_cond_avg * r.g);
    const double rhs_se = std::sqrt(
        std::pow(rep.s0 * (1.0 - ph * ph) * 0.5, 2.0) * (pi_p_se * pi_p_se + pi_m_se * pi_m_se) +
        std::pow(rep.s0 * denom * s_cond_avg, 2.0) * r.g_se * r.g_se +
        std::pow(rep.s0 * denom * r.g * 0.5, 2.0) * (s_p_se * s_p_se + s_m_se * s_m_se) +
        std::pow(((1.0 - ph * ph) * pi_diff + denom * s_cond_avg * r.g) * rep.s0_se, 2.0));
    r.resid_ac = lhs - rhs;
    r.resid_ac_se = std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);

    // (iii) appendix identities
    r.id_mean = r.pi - 0.5 * (r.pi_plus + r.pi_minus);
    r.id_mean_se = std::sqrt(r.pi_se * r.pi_se + 0.25 * (pi_p_se * pi_p_se + pi_m_se * pi_m_se));
    r.id_spread = r.s_plus - r.s_minus;
    r.id_spread_se = std::sqrt(s_p_se * s_p_se + s_m_se * s_m_se);
    // pooled-minus-conditional contrast: pi - pi_+ = (n_-/n)(pi_- - pi_+)
    const double w_m = static_cast<double>(r.n_minus) / nn;
    r.id_cross = (r.pi - r.pi_plus) + (r.s - r.s_plus);
    r.id_cross_se = w_m * std::sqrt(pi_p_se * pi_p_se + pi_m_se * pi_m_se +
                                    s_p_se * s_p_se + s_m_se * s_m_se);
    rep.rows.push_back(r);
  }
  return rep;
}

/// Sample autocorrelation of a +-1 sign sequence at the given lags, with
/// overlap-corrected standard errors (n_eff = n/lag).
struct SignAcRow {
  int64_t lag = 0;
  double c = 0.0;
  double stderr_c = 0.0;
};

inline std::vector<SignAcRow> sign_autocorrelation(const std::vector<int8_t>& s,
                                                   const std::vector<int64_t>& lags) {
  std::vector<SignAcRow> rows;
  const size_t n = s.size();
  for (int64_t lag : lags) {
    const auto l = static_cast<size_t>(lag);
    if (n <= l + 1) continue;
    int64_t acc = 0;
    for (size_t i = 0; i + l < n; ++i) acc += static_cast<int64_t>(s[i]) * s[i + l];
    SignAcRow r;
    r.lag = lag;
    const double m = static_cast<double>(n - l);
    r.c = static_cast<double>(acc) / m;
    const double n_eff = std::max(m / static_cast<double>(lag), 2.0);
    r.stderr_c = std::sqrt(std::max(1.0 - r.c * r.c, 1e-12) / n_eff);
    rows.push_back(r);
  }
  return rows;
}

/// Weighted log-log fit of the autocorrelation decay exponent: c(t) ~ t^-gamma.
inline LinearFit sign_ac_exponent(const std::vector<SignAcRow>& rows, int64_t lo, int64_t hi) {
  std::vector<double> t, c, se;
  for (const auto& r : rows) {
    if (r.lag < lo || r.lag > hi) continue;
    t.push_back(static_cast<double>(r.lag));
    c.push_back(r.c);
    se.push_back(r.stderr_c);
  }
  return wls_loglog(t, c, se);
}

}  // namespace latentlob
