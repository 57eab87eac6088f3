#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "latentlob/book.hpp"

namespace latentlob {

/// Log-spaced lag grid containing the exact powers of ten, so the phase
/// statistic can read D(10) and D(1000) without interpolation.
inline std::vector<int64_t> log_lag_grid(int64_t max_lag, int per_decade = 8) {
  std::vector<int64_t> lags;
  for (int k = 0;; ++k) {
    const double v = std::pow(10.0, static_cast<double>(k) / per_decade);
    const auto lag = static_cast<int64_t>(std::llround(v));
    if (lag > max_lag) break;
    if (lags.empty() || lag != lags.back()) lags.push_back(lag);
  }
  return lags;
}

/// Variogram accumulator: per-lag sums of squared mid-price increments in
/// trade time, averaged over overlapping start points.
struct VariogramAcc {
  std::vector<int64_t> lags;
  std::vector<double> sum;   // sum of (p(t0+l) - p(t0))^2
  std::vector<double> sum2;  // sum of squares of the above
  std::vector<uint64_t> n;

  VariogramAcc() = default;
  explicit VariogramAcc(std::vector<int64_t> lag_grid)
      : lags(std::move(lag_grid)), sum(lags.size(), 0.0), sum2(lags.size(), 0.0), n(lags.size(), 0) {}

  void add_series(std::span<const double> p) {
    for (size_t k = 0; k < lags.size(); ++k) {
      const auto l = static_cast<size_t>(lags[k]);
      if (p.size() <= l) continue;
      double s = 0, s2 = 0;
      for (size_t i = 0; i + l < p.size(); ++i) {
        const double d = p[i + l] - p[i];
        const double d2 = d * d;
        s += d2;
        s2 += d2 * d2;
      }
      sum[k] += s;
      sum2[k] += s2;
      n[k] += p.size() - l;
    }
  }

  void merge(const VariogramAcc& o) {
    assert(lags == o.lags);
    for (size_t k = 0; k < lags.size(); ++k) {
      sum[k] += o.sum[k];
      sum2[k] += o.sum2[k];
      n[k] += o.n[k];
    }
  }

  /// Test/synthetic hook: set D(lag) directly from one exact sample.
  void set_exact(int64_t lag, double d_value) {
    for (size_t k = 0; k < lags.size(); ++k) {
      if (lags[k] == lag) {
        sum[k] = d_value;
        sum2[k] = d_value * d_value;
        n[k] = 1;
      }
    }
  }
};

/// Impact accumulator: mean price change at each cumulative-volume milestone.
struct ImpactAcc {
  std::vector<int64_t> q_grid;
  std::vector<double> sum, sum2;
  std::vector<uint64_t> n;

  ImpactAcc() = default;
  explicit ImpactAcc(std::vector<int64_t> grid)
      : q_grid(std::move(grid)), sum(q_grid.size(), 0.0), sum2(q_grid.size(), 0.0), n(q_grid.size(), 0) {}

  void add(size_t q_index, double impact) {
    sum[q_index] += impact;
    sum2[q_index] += impact * impact;
    n[q_index] += 1;
  }

  void merge(const ImpactAcc& o) {
    assert(q_grid == o.q_grid);
    for (size_t k = 0; k < q_grid.size(); ++k) {
      sum[k] += o.sum[k];
      sum2[k] += o.sum2[k];
      n[k] += o.n[k];
    }
  }
};

/// Post-completion relaxation path: I_{T+t} = <p_{T+t} - p_0> per lag after
/// the end of the meta-order, plus the terminal impact I_T.
struct DecayAcc {
  std::vector<double> sum, sum2;
  std::vector<uint64_t> n;
  double i_end_sum = 0, i_end_sum2 = 0;
  uint64_t n_traj = 0;

  DecayAcc() = default;
  explicit DecayAcc(size_t horizon) : sum(horizon, 0.0), sum2(horizon, 0.0), n(horizon, 0) {}

  void add_path(double i_end, std::span<const double> post_impact) {
    i_end_sum += i_end;
    i_end_sum2 += i_end * i_end;
    ++n_traj;
    const size_t m = std::min(post_impact.size(), sum.size());
    for (size_t k = 0; k < m; ++k) {
      sum[k] += post_impact[k];
      sum2[k] += post_impact[k] * post_impact[k];
      n[k] += 1;
    }
  }

  void merge(const DecayAcc& o) {
    assert(sum.size() == o.sum.size());
    for (size_t k = 0; k < sum.size(); ++k) {
      sum[k] += o.sum[k];
      sum2[k] += o.sum2[k];
      n[k] += o.n[k];
    }
    i_end_sum += o.i_end_sum;
    i_end_sum2 += o.i_end_sum2;
    n_traj += o.n_traj;
  }
};

/// Average book shape around the instantaneous mid, bid and ask sides kept
/// separate. Offset 0 is skipped (it is never unambiguously on one side).
struct ProfileAcc {
  int64_t halfwidth = 0;
  std::vector<double> sum_bid, sum_ask;    // indexed by |offset|-1
  std::vector<double> sum2_bid, sum2_ask;
  std::vector<uint64_t> n_bid, n_ask;

  ProfileAcc() = default;
  explicit ProfileAcc(int64_t hw)
      : halfwidth(hw),
        sum_bid(static_cast<size_t>(hw), 0.0), sum_ask(static_cast<size_t>(hw), 0.0),
        sum2_bid(static_cast<size_t>(hw), 0.0), sum2_ask(static_cast<size_t>(hw), 0.0),
        n_bid(static_cast<size_t>(hw), 0), n_ask(static_cast<size_t>(hw), 0) {}

  void sample(const OrderBook& book) {
    if (!book.has_bid() || !book.has_ask()) return;
    const double mid = book.mid_ticks();
    for (int64_t d = 1; d <= halfwidth; ++d) {
      const auto lvl_a = static_cast<int64_t>(std::llround(mid + static_cast<double>(d)));
      const auto lvl_b = static_cast<int64_t>(std::llround(mid - static_cast<double>(d)));
      const size_t k = static_cast<size_t>(d - 1);
      if (lvl_a <= book.hi()) {
        const auto v = static_cast<double>(book.volume_at(lvl_a));
        sum_ask[k] += v;
        sum2_ask[k] += v * v;
        n_ask[k] += 1;
      }
      if (lvl_b >= book.lo()) {
        const auto v = static_cast<double>(book.volume_at(lvl_b));
        sum_bid[k] += v;
        sum2_bid[k] += v * v;
        n_bid[k] += 1;
      }
    }
  }

  void merge(const ProfileAcc& o) {
    assert(halfwidth == o.halfwidth);
    for (size_t k = 0; k < sum_bid.size(); ++k) {
      sum_bid[k] += o.sum_bid[k];
      sum_ask[k] += o.sum_ask[k];
      sum2_bid[k] += o.sum2_bid[k];
      sum2_ask[k] += o.sum2_ask[k];
      n_bid[k] += o.n_bid[k];
      n_ask[k] += o.n_ask[k];
    }
  }
};

/// Geometric histogram of the volume at the best quotes, sampled per trade.
struct BestVolumeAcc {
  std::vector<int64_t> bin_lo, bin_hi;  // inclusive integer bins
  std::vector<uint64_t> count;

  BestVolumeAcc() = default;
  explicit BestVolumeAcc(int64_t vmax, double ratio = std::pow(10.0, 0.125)) {
    int64_t lo = 1;
    double edge = 1.0;
    while (lo <= vmax) {
      edge = std::max(edge * ratio, static_cast<double>(lo) + 1.0);
      int64_t hi = std::min(static_cast<int64_t>(edge) - 1, vmax);
      bin_lo.push_back(lo);
      bin_hi.push_back(hi);
      lo = hi + 1;
    }
    count.assign(bin_lo.size(), 0);
  }

  void add(int64_t v) {
    if (v < 1) return;
    // geometric bins: binary search
    const auto it = std::upper_bound(bin_lo.begin(), bin_lo.end(), v);
    size_t k = static_cast<size_t>(it - bin_lo.begin());
    if (k == 0) return;
    --k;
    if (v <= bin_hi[k]) count[k] += 1;  // beyond the top edge is dropped
  }

  void merge(const BestVolumeAcc& o) {
    assert(bin_lo == o.bin_lo);
    for (size_t k = 0; k < count.size(); ++k) count[k] += o.count[k];
  }
};

/// Per-lag conditional statistics in the last-execution-price frame: the
/// mid pi_t and half-spread s_t just before trade t+1, measured from l_t,
/// conditioned on the sign of trade 0; plus sign cross-moments for the
/// empirical g_t.
struct MarkovAcc {
  int64_t max_lag = 0;
  double phi_tilde = 0.0;

  std::vector<uint64_t> n, n_plus, n_minus;
  std::vector<double> sum_pi, sum_pi2, sum_pi_p, sum_pi_p2, sum_pi_m, sum_pi_m2;
  std::vector<double> sum_s, sum_s2, sum_s_p, sum_s_p2, sum_s_m, sum_s_m2;
  std::vector<double> sum_dl, sum_dl2;
  std::vector<double> sum_x, sum_x2;        // x = dl - pi - phi_tilde*s
  std::vector<double> sum_dldl0, sum_dldl0_2;
  std::vector<double> sum_eps, sum_epseps0;
  double s0_sum = 0, s0_sum2 = 0;
  uint64_t s0_n = 0;

  MarkovAcc() = default;
  MarkovAcc(int64_t lags, double participation) : max_lag(lags), phi_tilde(participation) {
    const auto m = static_cast<size_t>(lags + 1);
    n.assign(m, 0); n_plus.assign(m, 0); n_minus.assign(m, 0);
    sum_pi.assign(m, 0); sum_pi2.assign(m, 0);
    sum_pi_p.assign(m, 0); sum_pi_p2.assign(m, 0);
    sum_pi_m.assign(m, 0); sum_pi_m2.assign(m, 0);
    sum_s.assign(m, 0); sum_s2.assign(m, 0);
    sum_s_p.assign(m, 0); sum_s_p2.assign(m, 0);
    sum_s_m.assign(m, 0); sum_s_m2.assign(m, 0);
    sum_dl.assign(m, 0); sum_dl2.assign(m, 0);
    sum_x.assign(m, 0); sum_x2.assign(m, 0);
    sum_dldl0.assign(m, 0); sum_dldl0_2.assign(m, 0);
    sum_eps.assign(m, 0); sum_epseps0.assign(m, 0);
  }

  /// Add one observation at `lag`: book state before trade lag+1 in the
  /// l_lag frame plus the realized price step and signs.
  void add_sample(int64_t lag, double pi, double s, double dl, double dl0, int eps_lag, int eps0) {
    const auto k = static_cast<size_t>(lag);
    n[k] += 1;
    sum_pi[k] += pi; sum_pi2[k] += pi * pi;
    sum_s[k] += s; sum_s2[k] += s * s;
    sum_dl[k] += dl; sum_dl2[k] += dl * dl;
    const double x = dl - pi - phi_tilde * s;
    sum_x[k] += x; sum_x2[k] += x * x;
    const double prod = dl * dl0;
    sum_dldl0[k] += prod; sum_dldl0_2[k] += prod * prod;
    sum_eps[k] += eps_lag;
    sum_epseps0[k] += static_cast<double>(eps_lag * eps0);
    if (eps0 > 0) {
      n_plus[k] += 1;
      sum_pi_p[k] += pi; sum_pi_p2[k] += pi * pi;
      sum_s_p[k] += s; sum_s_p2[k] += s * s;
    } else {
      n_minus[k] += 1;
      sum_pi_m[k] += pi; sum_pi_m2[k] += pi * pi;
      sum_s_m[k] += s; sum_s_m2[k] += s * s;
    }
  }

  void add_s0(double s) {
    s0_sum += s;
    s0_sum2 += s * s;
    s0_n += 1;
  }

  void merge(const MarkovAcc& o) {
    assert(max_lag == o.max_lag);
    auto addv = [](auto& a, const auto& b) {
      for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    addv(n, o.n); addv(n_plus, o.n_plus); addv(n_minus, o.n_minus);
    addv(sum_pi, o.sum_pi); addv(sum_pi2, o.sum_pi2);
    addv(sum_pi_p, o.sum_pi_p); addv(sum_pi_p2, o.sum_pi_p2);
    addv(sum_pi_m, o.sum_pi_m); addv(sum_pi_m2, o.sum_pi_m2);
    addv(sum_s, o.sum_s); addv(sum_s2, o.sum_s2);
    addv(sum_s_p, o.sum_s_p); addv(sum_s_p2, o.sum_s_p2);
    addv(sum_s_m, o.sum_s_m); addv(sum_s_m2, o.sum_s_m2);
    addv(sum_dl, o.sum_dl); addv(sum_dl2, o.sum_dl2);
    addv(sum_x, o.sum_x); addv(sum_x2, o.sum_x2);
    addv(sum_dldl0, o.sum_dldl0); addv(sum_dldl0_2, o.sum_dldl0_2);
    addv(sum_eps, o.sum_eps); addv(sum_epseps0, o.sum_epseps0);
    s0_sum += o.s0_sum;
    s0_sum2 += o.s0_sum2;
    s0_n += o.s0_n;
  }
};

}  // namespace latentlob
