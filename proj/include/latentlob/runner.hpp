#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <thread>
#include <vector>

#include "latentlob/accumulators.hpp"
#include "latentlob/config.hpp"
#include "latentlob/engine.hpp"
#include "latentlob/measure.hpp"

namespace latentlob {

inline int resolve_threads(int requested, int replicas) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("LATENTLOB_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::min(t, std::max(replicas, 1));
}

/// Run `n` replica jobs over a bounded worker pool. Results land in replica
/// order, so any later merge is independent of the thread count.
template <class Result, class Job>
std::vector<Result> run_replicas(int n, int threads, Job job) {
  std::vector<Result> results(static_cast<size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n) return;
      results[static_cast<size_t>(r)] = job(static_cast<uint64_t>(r));
    }
  };
  const int nt = std::min(threads, n);
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

struct MeasureConfig {
  int64_t max_lag = 10'000;
  int lags_per_decade = 8;
  int64_t hurst_lo = 100, hurst_hi = 10'000;
  int64_t d_lag_lo = 100, d_lag_hi = 1'000;  // lags of the in-run D estimate
  int64_t profile_halfwidth = 2'048;
  int64_t profile_stride = 32;
  std::vector<int64_t> q_grid = {1, 2, 3, 5, 8, 13, 22, 36, 60, 100};
  int64_t markov_lags = 128;

  static MeasureConfig from_ini(const IniFile& ini) {
    MeasureConfig m;
    m.max_lag = ini.get_int("measure.max_lag", 10'000);
    m.lags_per_decade = static_cast<int>(ini.get_int("measure.lags_per_decade", 8));
    m.hurst_lo = ini.get_int("measure.hurst_lo", 100);
    m.hurst_hi = ini.get_int("measure.hurst_hi", 10'000);
    m.d_lag_lo = ini.get_int("measure.d_lag_lo", 100);
    m.d_lag_hi = ini.get_int("measure.d_lag_hi", 1'000);
    m.profile_halfwidth = ini.get_int("measure.profile_halfwidth", 2'048);
    m.profile_stride = ini.get_int("measure.profile_stride", 32);
    const auto qg = ini.get_list("measure.q_grid");
    if (!qg.empty()) {
      m.q_grid.clear();
      for (double q : qg) m.q_grid.push_back(static_cast<int64_t>(q));
    }
    m.markov_lags = ini.get_int("measure.markov_lags", 128);
    return m;
  }
};

/// Records the mid-price series in trade time plus periodic book samples.
struct SeriesRecorder {
  std::vector<double> mid;
  ProfileAcc* profile = nullptr;
  BestVolumeAcc* bestvol = nullptr;
  int64_t profile_stride = 32;
  int64_t count = 0;
  double last_mid = 0.0;

  void on_trade(const TradeRecord&, const OrderBook& book) {
    if (book.has_bid() && book.has_ask()) last_mid = book.mid_price();
    mid.push_back(last_mid);
    if (bestvol) {
      if (book.has_bid()) bestvol->add(book.volume_at(book.best_bid()));
      if (book.has_ask()) bestvol->add(book.volume_at(book.best_ask()));
    }
    if (profile && (count % profile_stride) == 0) profile->sample(book);
    ++count;
  }
};

/// Buffers the raw trade stream (bounded) for the lag-frame statistics.
struct TradeTapeRecorder {
  std::vector<TradeRecord> tape;
  size_t cap = 0;

  explicit TradeTapeRecorder(size_t capacity) : cap(capacity) { tape.reserve(capacity); }

  void on_trade(const TradeRecord& tr, const OrderBook&) {
    if (tape.size() < cap) tape.push_back(tr);
  }
};

// ---------------------------------------------------------------------------
// background-only experiment
// ---------------------------------------------------------------------------

struct SimulateResult {
  VariogramAcc variogram;
  ProfileAcc profile;
  BestVolumeAcc bestvol;
  uint64_t trades = 0;
  double tau = 0.0;

  void merge(const SimulateResult& o) {
    variogram.merge(o.variogram);
    profile.merge(o.profile);
    bestvol.merge(o.bestvol);
    trades += o.trades;
    tau += o.tau;
  }
};

inline SimulateResult simulate_replica(const ExperimentConfig& cfg, const MeasureConfig& mc,
                                       uint64_t replica, std::shared_ptr<const TrendTable> table) {
  SimulateResult out;
  out.variogram = VariogramAcc(log_lag_grid(mc.max_lag, mc.lags_per_decade));
  out.profile = ProfileAcc(mc.profile_halfwidth);
  out.bestvol = BestVolumeAcc(static_cast<int64_t>(4.0 * cfg.seed_mean()) + 16);
  Engine eng(cfg, replica, std::move(table));
  eng.warmup();
  SeriesRecorder rec;
  rec.mid.reserve(cfg.horizon_trades);
  rec.profile = &out.profile;
  rec.bestvol = &out.bestvol;
  rec.profile_stride = mc.profile_stride;
  eng.run_trades(cfg.horizon_trades, rec);
  out.variogram.add_series(rec.mid);
  out.trades = eng.trades();
  out.tau = eng.tau();
  return out;
}

inline SimulateResult simulate_experiment(const ExperimentConfig& cfg, const MeasureConfig& mc) {
  std::shared_ptr<const TrendTable> table;
  if (cfg.sign_mode == SignMode::LMF) table = std::make_shared<TrendTable>(cfg.gamma);
  const int threads = resolve_threads(cfg.threads, cfg.replicas);
  auto results = run_replicas<SimulateResult>(
      cfg.replicas, threads,
      [&](uint64_t r) { return simulate_replica(cfg, mc, r, table); });
  SimulateResult merged = std::move(results[0]);
  for (size_t r = 1; r < results.size(); ++r) merged.merge(results[r]);
  return merged;
}

/// Price diffusion constant in $^2 per second from the signature plot:
/// inverse-variance-weighted mean of sigma^2_t over the configured lag band,
/// converted from per-trade to per-second with the trade rate.
inline double estimate_diffusion(const std::vector<SignatureRow>& rows, double trade_rate,
                                 int64_t lag_lo, int64_t lag_hi) {
  double num = 0, den = 0;
  for (const auto& r : rows) {
    if (r.t < lag_lo || r.t > lag_hi || r.n == 0) continue;
    const double se = r.stderr_d / static_cast<double>(r.t);
    const double w = se > 0 ? 1.0 / (se * se) : 0.0;
    num += w * r.sigma2;
    den += w;
  }
  if (den == 0) throw std::runtime_error("no signature rows in the D-estimate band");
  return trade_rate * num / den;
}

// ---------------------------------------------------------------------------
// meta-order experiment
// ---------------------------------------------------------------------------

struct ImpactResult {
  ImpactAcc impact;
  DecayAcc decay;
  MarkovAcc markov;
  ProfileAcc post_profile;  // book shape right after completion (may be empty)
  uint64_t completed = 0;
  uint64_t incomplete = 0;
  uint64_t meta_trades = 0;
  uint64_t total_trades_during = 0;

  void merge(const ImpactResult& o) {
    impact.merge(o.impact);
    decay.merge(o.decay);
    markov.merge(o.markov);
    if (post_profile.halfwidth > 0) post_profile.merge(o.post_profile);
    completed += o.completed;
    incomplete += o.incomplete;
    meta_trades += o.meta_trades;
    total_trades_during += o.total_trades_during;
  }
};

struct ImpactOptions {
  uint64_t pre_trades = 64;       // stationary half-spread sample
  bool record_post_profile = false;
  int64_t post_profile_trades = 0;
};

inline void markov_add_path(MarkovAcc& acc, const std::vector<TradeRecord>& tape,
                            uint64_t t_end, double tick) {
  // Record indexing: tape[0] anchors the l-frame; the "first trade" of the
  // appendix statistics is tape[1], whose sign drives dl_0.
  if (tape.size() < 3) return;
  const int eps0 = tape[1].sign;
  const double dl0 =
      (static_cast<double>(tape[1].exec_level) - static_cast<double>(tape[0].exec_level)) * tick;
  const auto max_lag = static_cast<size_t>(acc.max_lag);
  for (size_t t = 0; t + 1 < tape.size() && t <= max_lag; ++t) {
    const TradeRecord& next = tape[t + 1];
    if (next.trade_index >= t_end) break;  // meta no longer active
    const double pi =
        (0.5 * (static_cast<double>(next.pre_ask) + static_cast<double>(next.pre_bid)) -
         static_cast<double>(tape[t].exec_level)) *
        tick;
    const double s =
        0.5 * (static_cast<double>(next.pre_ask) - static_cast<double>(next.pre_bid)) * tick;
    const double dl =
        (static_cast<double>(next.exec_level) - static_cast<double>(tape[t].exec_level)) * tick;
    acc.add_sample(static_cast<int64_t>(t), pi, s, dl, dl0, next.sign, eps0);
  }
}

inline ImpactResult impact_replica(const ExperimentConfig& cfg, const MetaOrderSpec& meta,
                                   const MeasureConfig& mc, const ImpactOptions& opt,
                                   uint64_t replica, std::shared_ptr<const TrendTable> table) {
  ImpactResult out;
  out.impact = ImpactAcc(mc.q_grid);
  out.decay = DecayAcc(meta.post_horizon);
  out.markov = MarkovAcc(mc.markov_lags, meta.participation());
  if (opt.record_post_profile) out.post_profile = ProfileAcc(mc.profile_halfwidth);

  Engine eng(cfg, replica, std::move(table));
  eng.warmup();

  struct PreRec {
    MarkovAcc* acc;
    double tick;
    void on_trade(const TradeRecord& tr, const OrderBook&) {
      if (tr.pre_bid != kNoQuote && tr.pre_ask != kNoQuote)
        acc->add_s0(0.5 * (static_cast<double>(tr.pre_ask) - static_cast<double>(tr.pre_bid)) * tick);
    }
  } pre{&out.markov, cfg.tick};
  eng.run_trades(opt.pre_trades, pre);

  TradeTapeRecorder tape(static_cast<size_t>(mc.markov_lags) + 2 + meta.post_horizon);
  const MetaResult res = eng.run_meta(meta, tape);
  out.meta_trades = 0;
  for (const auto& tr : tape.tape)
    if (tr.meta && tr.trade_index < res.t_end) ++out.meta_trades;
  out.total_trades_during = res.t_end - res.t_start;

  if (res.complete) {
    ++out.completed;
    // milestones: first crossing of each grid Q
    size_t gi = 0;
    for (const auto& [cum, mid] : res.milestones) {
      while (gi < mc.q_grid.size() && cum >= mc.q_grid[gi]) {
        out.impact.add(gi, mid - res.p0);
        ++gi;
      }
    }
    std::vector<double> post_impact(res.post_mid.size());
    for (size_t k = 0; k < res.post_mid.size(); ++k) post_impact[k] = res.post_mid[k] - res.p0;
    out.decay.add_path(res.p_end - res.p0, post_impact);
  } else {
    ++out.incomplete;  // reported, excluded from averages
  }
  markov_add_path(out.markov, tape.tape, res.t_end, cfg.tick);

  if (opt.record_post_profile) {
    SeriesRecorder rec;
    rec.profile = &out.post_profile;
    rec.profile_stride = 4;
    eng.run_trades(static_cast<uint64_t>(opt.post_profile_trades), rec);
  }
  return out;
}

inline ImpactResult impact_experiment(const ExperimentConfig& cfg, const MetaOrderSpec& meta,
                                      const MeasureConfig& mc, const ImpactOptions& opt = {}) {
  std::shared_ptr<const TrendTable> table;
  if (cfg.sign_mode == SignMode::LMF) table = std::make_shared<TrendTable>(cfg.gamma);
  const int threads = resolve_threads(cfg.threads, cfg.replicas);
  auto results = run_replicas<ImpactResult>(
      cfg.replicas, threads,
      [&](uint64_t r) { return impact_replica(cfg, meta, mc, opt, r, table); });
  ImpactResult merged = std::move(results[0]);
  for (size_t r = 1; r < results.size(); ++r) merged.merge(results[r]);
  return merged;
}

// ---------------------------------------------------------------------------
// phase-diagram sweep
// ---------------------------------------------------------------------------

enum class SweepParam { ZETA, PSI, ALPHA };

struct SweepPoint {
  double gamma = 0.0;
  double value = 0.0;
  double s = 0.0;
  double stderr_s = 0.0;
};

inline ExperimentConfig sweep_override(ExperimentConfig base, SweepParam param, double gamma,
                                       double value) {
  base.gamma = gamma;
  switch (param) {
    case SweepParam::ZETA:
      base.bg_kind = PolicyKind::ZETA;
      base.zeta = value;
      break;
    case SweepParam::PSI:
      base.bg_kind = PolicyKind::PSI;
      base.psi = value;
      break;
    case SweepParam::ALPHA:
      base.alpha = value;
      break;
  }
  return base;
}

inline std::vector<SweepPoint> sweep_experiment(const ExperimentConfig& base, const MeasureConfig& mc,
                                                SweepParam param, const std::vector<double>& gammas,
                                                const std::vector<double>& values) {
  std::vector<SweepPoint> out;
  for (double g : gammas) {
    for (double v : values) {
      const ExperimentConfig cfg = sweep_override(base, param, g, v);
      MeasureConfig m = mc;
      m.max_lag = std::max<int64_t>(m.max_lag, 1000);
      const SimulateResult res = simulate_experiment(cfg, m);
      const PhaseStat ps = phase_statistic(res.variogram);
      out.push_back({g, v, ps.s, ps.stderr_s});
    }
  }
  return out;
}

}  // namespace latentlob
