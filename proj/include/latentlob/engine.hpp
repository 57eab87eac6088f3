#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "latentlob/book.hpp"
#include "latentlob/config.hpp"
#include "latentlob/flow.hpp"
#include "latentlob/rng.hpp"

namespace latentlob {

/// Recorder that ignores everything (warm-up phases).
struct NullRecorder {
  void on_trade(const TradeRecord&, const OrderBook&) {}
};

struct EventCounts {
  uint64_t deposits = 0;
  uint64_t cancels = 0;
  uint64_t cancel_noops = 0;
  uint64_t bg_trades = 0;
  uint64_t meta_trades = 0;
  uint64_t meta_deposits = 0;
  uint64_t meta_deposit_units = 0;
  uint64_t extensions = 0;
};

/// Outcome of one meta-order execution.
struct MetaResult {
  double p0 = 0.0;  // mid price ($) just before the meta-order starts
  std::vector<std::pair<int64_t, double>> milestones;  // (cum executed, mid after)
  int64_t executed = 0;
  bool complete = false;
  double p_end = 0.0;
  uint64_t t_start = 0, t_end = 0;
  double tau_start = 0.0, tau_end = 0.0;
  std::vector<double> post_mid;  // mid after each of the next post_horizon trades
};

/// Exact event-driven simulator of the latent book: market orders, uniform
/// depositions and per-unit cancellations race as Poisson processes; each
/// step draws the next event time from the total rate and dispatches in
/// proportion to the per-process rates.
class Engine {
 public:
  Engine(const ExperimentConfig& cfg, uint64_t replica_index,
         std::shared_ptr<const TrendTable> trend_table = nullptr)
      : cfg_(cfg),
        rng_(cfg.seed, replica_index),
        bg_policy_(cfg.background_policy()),
        refill_(cfg.alpha),
        book_(make_book_params(cfg), -cfg.effective_halfwidth(), 2 * cfg.effective_halfwidth()) {
    switch (cfg.sign_mode) {
      case SignMode::LMF:
        if (!trend_table) trend_table = std::make_shared<TrendTable>(cfg.gamma);
        signs_ = SignStream::lmf(std::move(trend_table));
        break;
      case SignMode::IID:
        signs_ = SignStream::iid();
        break;
      case SignMode::CONST:
        signs_ = SignStream::constant(1);
        break;
    }
    if (cfg.stationary_init) seed_stationary();
    else seed_flat();
  }

  /// Test hook: replace the background sign stream.
  void set_sign_stream(SignStream s) { signs_ = s; }

  const OrderBook& book() const { return book_; }
  OrderBook& book_mut() { return book_; }
  double tau() const { return tau_; }
  uint64_t trades() const { return trades_; }
  const EventCounts& counts() const { return counts_; }
  double mid_price() const { return book_.mid_price(); }
  Rng& rng() { return rng_; }

  void warmup() {
    NullRecorder rec;
    run_time(cfg_.effective_warmup(), rec);
  }

  /// Advance until `n` more trades have printed.
  template <class Rec>
  void run_trades(uint64_t n, Rec& rec) {
    const uint64_t target = trades_ + n;
    while (trades_ < target) step(rec);
  }

  /// Advance the real-time clock by `duration` seconds.
  template <class Rec>
  void run_time(double duration, Rec& rec) {
    const double target = tau_ + duration;
    while (tau_ < target) step(rec);
  }

  /// Execute one meta-order per `spec` on top of the background flow.
  /// The recorder sees every trade (meta ones flagged); the returned
  /// trajectory carries the milestones and the relaxation path.
  template <class Rec>
  MetaResult run_meta(const MetaOrderSpec& spec, Rec& rec) {
    MetaResult res;
    ensure_window();
    res.p0 = book_.mid_price();
    res.t_start = trades_;
    res.tau_start = tau_;

    meta_active_ = true;
    meta_spec_ = &spec;
    meta_policy_ = spec.trader_policy();
    meta_executed_ = 0;
    meta_result_ = &res;

    const bool fixed_q = spec.q > 0;
    const bool fixed_t = spec.duration > 0;
    const double tau_stop = tau_ + (fixed_t ? spec.duration : 0.0);
    while (fixed_q || fixed_t) {
      if (fixed_q && meta_executed_ >= spec.q) {
        res.complete = true;
        break;
      }
      if (fixed_t && tau_ >= tau_stop) {
        res.complete = spec.q <= 0 || meta_executed_ >= spec.q;
        break;
      }
      if (trades_ - res.t_start > spec.max_trades) {
        res.complete = false;  // horizon exceeded; excluded from averages upstream
        break;
      }
      step(rec);
    }
    if (!fixed_q && !fixed_t) res.complete = true;  // zero-length meta-order
    meta_active_ = false;
    meta_spec_ = nullptr;
    meta_result_ = nullptr;
    book_.clear_flags();  // leftover resting meta units become ordinary orders

    res.executed = meta_executed_;
    res.t_end = trades_;
    res.tau_end = tau_;
    ensure_window();
    res.p_end = book_.mid_price();

    res.post_mid.reserve(spec.post_horizon);
    struct PostRec {
      Engine* e;
      MetaResult* r;
      Rec* inner;
      void on_trade(const TradeRecord& tr, const OrderBook& b) {
        inner->on_trade(tr, b);
        r->post_mid.push_back(b.has_bid() && b.has_ask() ? b.mid_price() : r->p_end);
      }
    } post{this, &res, &rec};
    run_trades(spec.post_horizon, post);
    return res;
  }

  /// One Gillespie event. Returns after dispatching exactly one event.
  template <class Rec>
  void step(Rec& rec) {
    ensure_window();
    const double r_mo = cfg_.mu;
    const double r_meta = meta_active_ ? cfg_.mu * meta_spec_->phi : 0.0;
    const double r_dep = cfg_.lambda_w * static_cast<double>(book_.width());
    const double r_can = cfg_.nu * static_cast<double>(book_.total_volume());
    const double total = r_mo + r_meta + r_dep + r_can;
    tau_ += rng_.exponential(total);
    double u = rng_.uniform() * total;
    if ((u -= r_dep) < 0) {
      do_deposit();
    } else if ((u -= r_can) < 0) {
      do_cancel();
    } else if ((u -= r_mo) < 0) {
      do_background_trade(rec);
    } else {
      do_meta_event(rec);
    }
  }

 private:
  static BookParams make_book_params(const ExperimentConfig& cfg) {
    BookParams p;
    p.tick = cfg.tick;
    p.seed_mean = cfg.seed_mean();
    p.width_cap = 2 * cfg.effective_halfwidth() + std::max<int64_t>(cfg.effective_halfwidth() / 2, 128);
    return p;
  }

  /// Seed the book level-by-level with Poisson draws around the mean-field
  /// stationary shape rho(p) = (lambda w/nu)(1 - exp(-p/p*)), buy side below
  /// the initial mid, sell side above.
  void seed_stationary() {
    const double pstar = cfg_.pstar_estimate();
    const double mean_cap = cfg_.seed_mean();
    for (int64_t level = book_.lo(); level <= book_.hi(); ++level) {
      const double dist = (std::abs(2 * level + 1)) * 0.5 * cfg_.tick;  // from the boundary at -1/2
      const double mean = mean_cap * (1.0 - std::exp(-dist / pstar));
      const int64_t v = rng_.poisson(mean);
      if (v > 0) book_.seed_level(level, level < 0 ? Side::Buy : Side::Sell, v);
    }
    book_.finish_seeding();
    ensure_nonempty_sides();
  }

  void seed_flat() {
    // cold start: a single unit on each side around the initial mid
    book_.seed_level(-1, Side::Buy, 1);
    book_.seed_level(0, Side::Sell, 1);
    book_.finish_seeding();
  }

  void ensure_nonempty_sides() {
    if (!book_.has_bid()) book_.deposit_at(book_.has_ask() ? book_.best_ask() - 1 : -1, BookSide::Buy);
    if (!book_.has_ask()) book_.deposit_at(book_.best_bid() + 1, BookSide::Sell);
  }

  /// Keep both quotes comfortably inside the window, extending with
  /// stationary-seeded territory when a quote drifts within the margin.
  void ensure_window() {
    for (int guard = 0; guard < 256; ++guard) {
      const int64_t margin = std::max<int64_t>(
          static_cast<int64_t>(cfg_.edge_margin_frac * static_cast<double>(book_.width())), 2);
      const int64_t chunk = std::max<int64_t>(book_.width() / 8, 64);
      if (!book_.has_ask() || book_.best_ask() > book_.hi() - margin) {
        book_.extend_window(+1, chunk, rng_);
        ++counts_.extensions;
        if (!book_.has_ask()) continue;  // seeded zeros; extend again
      }
      if (!book_.has_bid() || book_.best_bid() < book_.lo() + margin) {
        book_.extend_window(-1, chunk, rng_);
        ++counts_.extensions;
        if (!book_.has_bid()) continue;
      }
      if (book_.has_bid() && book_.has_ask() &&
          book_.best_ask() <= book_.hi() - margin && book_.best_bid() >= book_.lo() + margin) {
        return;
      }
    }
    throw std::runtime_error("window extension failed to locate liquidity (seed mean too small?)");
  }

  void do_deposit() {
    const BookSide side = cfg_.alpha > 0.0
                              ? refill_.side(last_sign_, rng_)
                              : (rng_.next_u64() & 1 ? BookSide::Buy : BookSide::Sell);
    int64_t level = book_.deposit(side, rng_);
    if (level == kNoQuote) {
      // admissible set empty on that side: grow the window and retry once
      book_.extend_window(side == BookSide::Buy ? -1 : +1, std::max<int64_t>(book_.width() / 8, 64), rng_);
      ++counts_.extensions;
      level = book_.deposit(side, rng_);
      if (level == kNoQuote) throw std::runtime_error("deposit failed after window extension");
    }
    ++counts_.deposits;
  }

  void do_cancel() {
    const CancelOutcome out = book_.cancel(rng_);
    if (out.kind == CancelOutcome::Removed) ++counts_.cancels;
    else ++counts_.cancel_noops;
  }

  template <class Rec>
  void do_background_trade(Rec& rec) {
    const int sign = signs_.next(rng_);
    execute_trade(sign, bg_policy_, false, rec);
    ++counts_.bg_trades;
  }

  template <class Rec>
  void do_meta_event(Rec& rec) {
    if (meta_spec_->style == MetaStyle::MARKET) {
      execute_trade(+1, meta_policy_, true, rec);
      ++counts_.meta_trades;
    } else {
      // limit-order execution: deposit a non-cancellable buy block at the bid
      const int64_t bid = book_.best_bid();
      const int64_t vb = book_.volume_at(bid);
      const auto units = std::max<int64_t>(
          static_cast<int64_t>(std::floor(meta_spec_->fraction * static_cast<double>(vb))), 1);
      book_.deposit_at(bid, BookSide::Buy, units, /*flagged=*/true);
      ++counts_.meta_deposits;
      counts_.meta_deposit_units += static_cast<uint64_t>(units);
    }
  }

  template <class Rec>
  void execute_trade(int sign, const VolumePolicy& policy, bool is_meta, Rec& rec) {
    // the opposite best always exists here: ensure_window ran in step()
    const int64_t best = sign > 0 ? book_.best_ask() : book_.best_bid();
    const int64_t v_best = book_.volume_at(best);
    int64_t vol = policy.draw(v_best, rng_);
    if (is_meta && meta_spec_->q > 0) vol = std::min(vol, meta_spec_->q - meta_executed_);
    TradeRecord tr = book_.execute_market(sign, vol, rng_);
    tr.trade_index = trades_;
    tr.real_time = tau_;
    tr.meta = is_meta;
    ++trades_;
    last_sign_ = sign;

    if (meta_active_) {
      int64_t credited = 0;
      if (is_meta && meta_spec_->style == MetaStyle::MARKET) {
        credited = vol;
      } else if (tr.flagged_consumed > 0) {
        credited = tr.flagged_consumed;
        if (meta_spec_->q > 0) credited = std::min(credited, meta_spec_->q - meta_executed_);
      }
      if (credited > 0) {
        meta_executed_ += credited;
        ensure_window();
        meta_result_->milestones.emplace_back(meta_executed_, book_.mid_price());
      }
    }
    rec.on_trade(tr, book_);
  }

  ExperimentConfig cfg_;
  Rng rng_;
  SignStream signs_;
  VolumePolicy bg_policy_;
  RefillPolicy refill_;
  OrderBook book_;
  double tau_ = 0.0;
  uint64_t trades_ = 0;
  int last_sign_ = 0;
  EventCounts counts_;

  bool meta_active_ = false;
  const MetaOrderSpec* meta_spec_ = nullptr;
  VolumePolicy meta_policy_ = VolumePolicy::unit();
  int64_t meta_executed_ = 0;
  MetaResult* meta_result_ = nullptr;
};

}  // namespace latentlob
