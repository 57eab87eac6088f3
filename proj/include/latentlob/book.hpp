#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "latentlob/fenwick.hpp"
#include "latentlob/flow.hpp"
#include "latentlob/rng.hpp"

namespace latentlob {

enum class Side : uint8_t { Empty = 0, Buy = 1, Sell = 2 };

constexpr int64_t kNoQuote = INT64_MIN;

/// One executed market order. Quotes are recorded just before execution;
/// prices are integer tick indices on the absolute grid.
struct TradeRecord {
  uint64_t trade_index = 0;  // trade-time t
  double real_time = 0.0;    // tau at execution
  int sign = 0;              // +1 buy, -1 sell
  int64_t volume = 0;        // executed units, >= 1
  int64_t exec_level = 0;    // l_t: level hit by the order
  int64_t pre_bid = kNoQuote;
  int64_t pre_ask = kNoQuote;
  int64_t flagged_consumed = 0;  // resting meta units among `volume`
  bool meta = false;             // order came from the meta-order trader
};

struct BookParams {
  double tick = 0.01;           // price per level
  double seed_mean = 0.0;       // stationary per-level occupancy, lambda*w/nu (capped)
  int64_t width_cap = 1 << 20;  // soft bound on the simulated window width
};

struct CancelOutcome {
  enum Kind { Removed, FlaggedNoop, EmptyBook } kind = EmptyBook;
  int64_t level = 0;
};

/// The latent order book over a sliding window of price levels.
///
/// Unit orders only: `vol_[i]` counts units at absolute level `base_+i`,
/// sampled volume-proportionally through a Fenwick tree. Buy orders live
/// strictly below sell orders at all times. A subset of units can be flagged
/// as belonging to a limit-order meta execution; flagged units are immune to
/// cancellation but are consumed by trades like any other unit.
class OrderBook {
 public:
  OrderBook(BookParams params, int64_t lo, int64_t n_levels)
      : params_(params), base_(lo) {
    vol_.assign(static_cast<size_t>(n_levels), 0);
    flagged_.assign(static_cast<size_t>(n_levels), 0);
    side_.assign(static_cast<size_t>(n_levels), Side::Empty);
    fen_.reset(static_cast<size_t>(n_levels));
    flagged_total_ = 0;
  }

  // --- geometry ---------------------------------------------------------
  int64_t lo() const { return base_; }
  int64_t hi() const { return base_ + static_cast<int64_t>(vol_.size()) - 1; }
  int64_t width() const { return static_cast<int64_t>(vol_.size()); }
  double tick() const { return params_.tick; }
  const BookParams& params() const { return params_; }

  // --- state queries ----------------------------------------------------
  int64_t best_bid() const { return best_bid_; }
  int64_t best_ask() const { return best_ask_; }
  bool has_bid() const { return best_bid_ != kNoQuote; }
  bool has_ask() const { return best_ask_ != kNoQuote; }
  int64_t total_volume() const { return fen_.total(); }
  int64_t flagged_volume() const { return flagged_total_; }
  int64_t last_trade_level() const { return last_trade_; }

  int64_t volume_at(int64_t level) const {
    return in_window(level) ? vol_[slot(level)] : 0;
  }
  int64_t flagged_at(int64_t level) const {
    return in_window(level) ? flagged_[slot(level)] : 0;
  }
  Side side_at(int64_t level) const {
    return in_window(level) ? side_[slot(level)] : Side::Empty;
  }

  /// Mid price in ticks; requires both quotes.
  double mid_ticks() const {
    return 0.5 * (static_cast<double>(best_bid_) + static_cast<double>(best_ask_));
  }
  double mid_price() const { return mid_ticks() * params_.tick; }
  int64_t spread_ticks() const { return best_ask_ - best_bid_; }

  /// Number of levels a buy deposition may land on: everything in the window
  /// strictly below the best ask (the whole window if no ask is present).
  int64_t admissible_buy_count() const {
    return has_ask() ? std::max<int64_t>(best_ask_ - base_, 0) : width();
  }
  int64_t admissible_sell_count() const {
    return has_bid() ? std::max<int64_t>(hi() - best_bid_, 0) : width();
  }

  // --- events -----------------------------------------------------------

  /// Deposit one unit on `side`, uniformly over the admissible levels.
  /// Returns the level, or kNoQuote if the admissible set is empty (window
  /// exhausted on that side; caller must extend).
  int64_t deposit(BookSide side, Rng& rng) {
    if (side == BookSide::Buy) {
      const int64_t n = admissible_buy_count();
      if (n <= 0) return kNoQuote;
      const int64_t level = base_ + static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
      deposit_at(level, side);
      return level;
    }
    const int64_t n = admissible_sell_count();
    if (n <= 0) return kNoQuote;
    const int64_t level = hi() - static_cast<int64_t>(rng.below(static_cast<uint64_t>(n)));
    deposit_at(level, side);
    return level;
  }

  /// Deposit `units` at an explicit level (meta limit orders set `flagged`).
  void deposit_at(int64_t level, BookSide side, int64_t units = 1, bool flagged = false) {
    assert(in_window(level) && units >= 1);
    const size_t i = slot(level);
    assert(side_[i] == Side::Empty ||
           side_[i] == (side == BookSide::Buy ? Side::Buy : Side::Sell));
    vol_[i] += units;
    fen_.add(i, units);
    if (flagged) {
      flagged_[i] += units;
      flagged_total_ += units;
    }
    if (side == BookSide::Buy) {
      side_[i] = Side::Buy;
      if (!has_bid() || level > best_bid_) best_bid_ = level;
    } else {
      side_[i] = Side::Sell;
      if (!has_ask() || level < best_ask_) best_ask_ = level;
    }
  }

  /// Remove one unit chosen uniformly among all resting units. If the chosen
  /// unit is flagged (non-cancellable) the call is a no-op; this thinning
  /// keeps the total cancellation rate exactly nu * total_volume.
  CancelOutcome cancel(Rng& rng) {
    if (fen_.total() == 0) return {CancelOutcome::EmptyBook, 0};
    const size_t i = fen_.sample(rng);
    const int64_t level = base_ + static_cast<int64_t>(i);
    if (flagged_[i] > 0 &&
        rng.below(static_cast<uint64_t>(vol_[i])) < static_cast<uint64_t>(flagged_[i])) {
      return {CancelOutcome::FlaggedNoop, level};
    }
    vol_[i] -= 1;
    fen_.add(i, -1);
    if (vol_[i] == 0) on_level_emptied(level);
    return {CancelOutcome::Removed, level};
  }

  /// Execute a market order of `volume` units against the opposite best.
  /// Requires the opposite quote to exist and volume <= volume at that quote
  /// (no trade-through by construction).
  TradeRecord execute_market(int sign, int64_t volume, Rng& rng) {
    assert(sign == 1 || sign == -1);
    const int64_t level = sign > 0 ? best_ask_ : best_bid_;
    assert(level != kNoQuote);
    const size_t i = slot(level);
    assert(volume >= 1 && volume <= vol_[i]);

    TradeRecord tr;
    tr.sign = sign;
    tr.volume = volume;
    tr.exec_level = level;
    tr.pre_bid = best_bid_;
    tr.pre_ask = best_ask_;
    if (flagged_[i] > 0) {
      tr.flagged_consumed = hypergeometric(rng, volume, flagged_[i], vol_[i]);
      flagged_[i] -= tr.flagged_consumed;
      flagged_total_ -= tr.flagged_consumed;
    }
    vol_[i] -= volume;
    fen_.add(i, -volume);
    if (vol_[i] == 0) on_level_emptied(level);
    last_trade_ = level;
    return tr;
  }

  /// Append `n` levels beyond the window on `side_dir` (-1 left / +1 right),
  /// seeded with Poisson(seed_mean) stationary occupancy and labelled with
  /// the half-line side. Also trims the far end back to the width cap,
  /// never touching levels between (and including) the quotes.
  void extend_window(int side_dir, int64_t n, Rng& rng) {
    assert(n >= 1);
    std::vector<int64_t> fresh(static_cast<size_t>(n));
    for (auto& v : fresh) v = rng.poisson(params_.seed_mean);
    if (side_dir < 0) {
      std::vector<int64_t> nv(fresh.begin(), fresh.end());
      nv.insert(nv.end(), vol_.begin(), vol_.end());
      std::vector<int64_t> nf(static_cast<size_t>(n), 0);
      nf.insert(nf.end(), flagged_.begin(), flagged_.end());
      std::vector<Side> ns(static_cast<size_t>(n), Side::Empty);
      for (size_t i = 0; i < static_cast<size_t>(n); ++i)
        ns[i] = fresh[i] > 0 ? Side::Buy : Side::Empty;
      ns.insert(ns.end(), side_.begin(), side_.end());
      vol_ = std::move(nv);
      flagged_ = std::move(nf);
      side_ = std::move(ns);
      base_ -= n;
    } else {
      for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
        vol_.push_back(fresh[i]);
        flagged_.push_back(0);
        side_.push_back(fresh[i] > 0 ? Side::Sell : Side::Empty);
      }
    }
    rescan_quotes();
    trim_to_cap(side_dir);
    fen_.build(vol_);
  }

  /// Drop all meta flags (units become ordinary cancellable orders).
  void clear_flags() {
    if (flagged_total_ == 0) return;
    std::fill(flagged_.begin(), flagged_.end(), 0);
    flagged_total_ = 0;
  }

  // --- diagnostics ------------------------------------------------------

  /// CSV snapshot of non-empty levels: level_price, side, volume.
  void snapshot_csv(std::ostream& os) const {
    os << "level_price,side,volume\n";
    char buf[64];
    for (size_t i = 0; i < vol_.size(); ++i) {
      if (vol_[i] == 0) continue;
      const double price = static_cast<double>(base_ + static_cast<int64_t>(i)) * params_.tick;
      std::snprintf(buf, sizeof(buf), "%.12g", price);
      os << buf << ',' << (side_[i] == Side::Buy ? "BUY" : "SELL") << ',' << vol_[i] << '\n';
    }
  }

  /// Full structural check, used by tests after event sequences.
  bool check_invariants(std::string* why = nullptr) const {
    auto fail = [&](const char* msg) {
      if (why) *why = msg;
      return false;
    };
    int64_t sum = 0, fsum = 0;
    int64_t max_buy = kNoQuote, min_sell = kNoQuote;
    for (size_t i = 0; i < vol_.size(); ++i) {
      if (vol_[i] < 0 || flagged_[i] < 0 || flagged_[i] > vol_[i]) return fail("negative or over-flagged volume");
      if ((vol_[i] == 0) != (side_[i] == Side::Empty)) return fail("side label inconsistent with volume");
      if (fen_.value(i) != vol_[i]) return fail("fenwick value mismatch");
      sum += vol_[i];
      fsum += flagged_[i];
      const int64_t level = base_ + static_cast<int64_t>(i);
      if (side_[i] == Side::Buy && (max_buy == kNoQuote || level > max_buy)) max_buy = level;
      if (side_[i] == Side::Sell && (min_sell == kNoQuote || level < min_sell)) min_sell = level;
      if (side_[i] == Side::Buy && min_sell != kNoQuote && level > min_sell) return fail("buy level above a sell level");
    }
    if (sum != fen_.total()) return fail("fenwick total mismatch");
    if (fsum != flagged_total_) return fail("flagged total mismatch");
    if (max_buy != best_bid_) return fail("cached best bid wrong");
    if (min_sell != best_ask_) return fail("cached best ask wrong");
    if (max_buy != kNoQuote && min_sell != kNoQuote && max_buy >= min_sell) return fail("crossed book");
    return true;
  }

  /// Recompute cached quotes from labels (used after bulk seeding).
  void rescan_quotes() {
    best_bid_ = kNoQuote;
    best_ask_ = kNoQuote;
    for (size_t i = 0; i < vol_.size(); ++i) {
      if (vol_[i] == 0) continue;
      const int64_t level = base_ + static_cast<int64_t>(i);
      if (side_[i] == Side::Buy) {
        if (best_bid_ == kNoQuote || level > best_bid_) best_bid_ = level;
      } else if (side_[i] == Side::Sell) {
        if (best_ask_ == kNoQuote || level < best_ask_) best_ask_ = level;
      }
    }
  }

  /// Bulk-seed a level during construction (no Fenwick update; call
  /// finish_seeding() afterwards).
  void seed_level(int64_t level, Side side, int64_t units) {
    const size_t i = slot(level);
    vol_[i] = units;
    side_[i] = units > 0 ? side : Side::Empty;
  }

  void finish_seeding() {
    fen_.build(vol_);
    rescan_quotes();
  }

 private:
  bool in_window(int64_t level) const { return level >= base_ && level <= hi(); }
  size_t slot(int64_t level) const { return static_cast<size_t>(level - base_); }

  void on_level_emptied(int64_t level) {
    const size_t i = slot(level);
    const Side was = side_[i];
    side_[i] = Side::Empty;
    if (was == Side::Buy && level == best_bid_) {
      int64_t l = level - 1;
      while (l >= base_ && side_[slot(l)] != Side::Buy) --l;
      best_bid_ = l >= base_ ? l : kNoQuote;
    } else if (was == Side::Sell && level == best_ask_) {
      int64_t l = level + 1;
      const int64_t top = hi();
      while (l <= top && side_[slot(l)] != Side::Sell) ++l;
      best_ask_ = l <= top ? l : kNoQuote;
    }
  }

  /// Draws without replacement: number of flagged units among `draws` picks
  /// from a level holding `flagged` flagged of `total` units.
  static int64_t hypergeometric(Rng& rng, int64_t draws, int64_t flagged, int64_t total) {
    if (draws >= total) return flagged;
    // Sample the smaller of (taken, left-behind) to bound the loop.
    const bool complement = draws > total - draws;
    const int64_t k = complement ? total - draws : draws;
    int64_t f = flagged, t = total, hit = 0;
    for (int64_t j = 0; j < k; ++j) {
      if (rng.below(static_cast<uint64_t>(t)) < static_cast<uint64_t>(f)) {
        ++hit;
        --f;
      }
      --t;
    }
    return complement ? flagged - hit : hit;
  }

  void trim_to_cap(int64_t grown_dir) {
    int64_t excess = width() - params_.width_cap;
    if (excess <= 0) return;
    const int64_t keep = params_.width_cap / 4;
    if (grown_dir > 0) {
      // Trim from the left, staying clear of the quotes region.
      int64_t limit = has_bid() ? best_bid_ - keep : hi() - params_.width_cap + 1;
      int64_t cut = std::min(excess, limit - base_);
      if (cut <= 0) return;
      for (int64_t j = 0; j < cut; ++j) flagged_total_ -= flagged_[static_cast<size_t>(j)];
      vol_.erase(vol_.begin(), vol_.begin() + cut);
      flagged_.erase(flagged_.begin(), flagged_.begin() + cut);
      side_.erase(side_.begin(), side_.begin() + cut);
      base_ += cut;
    } else {
      int64_t limit = has_ask() ? best_ask_ + keep : base_ + params_.width_cap - 1;
      int64_t cut = std::min(excess, hi() - limit);
      if (cut <= 0) return;
      const size_t nkeep = vol_.size() - static_cast<size_t>(cut);
      for (size_t j = nkeep; j < vol_.size(); ++j) flagged_total_ -= flagged_[j];
      vol_.resize(nkeep);
      flagged_.resize(nkeep);
      side_.resize(nkeep);
    }
    rescan_quotes();
  }

  BookParams params_;
  int64_t base_;
  std::vector<int64_t> vol_;
  std::vector<int64_t> flagged_;
  std::vector<Side> side_;
  Fenwick fen_;
  int64_t best_bid_ = kNoQuote;
  int64_t best_ask_ = kNoQuote;
  int64_t flagged_total_ = 0;
  int64_t last_trade_ = 0;
};

}  // namespace latentlob
