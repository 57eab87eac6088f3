#include "latentlob/book.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace latentlob;

namespace {

OrderBook small_book(int64_t lo = -10, int64_t n = 21, double seed_mean = 0.0) {
  BookParams p;
  p.tick = 0.01;
  p.seed_mean = seed_mean;
  p.width_cap = 4096;
  return OrderBook(p, lo, n);
}

}  // namespace

TEST(OrderBook, DepositInsideSpreadMovesQuote) {
  auto book = small_book();
  book.seed_level(-5, Side::Buy, 2);
  book.seed_level(5, Side::Sell, 2);
  book.finish_seeding();
  EXPECT_EQ(book.best_bid(), -5);
  EXPECT_EQ(book.best_ask(), 5);
  book.deposit_at(-1, BookSide::Buy);
  EXPECT_EQ(book.best_bid(), -1);
  book.deposit_at(2, BookSide::Sell);
  EXPECT_EQ(book.best_ask(), 2);
  std::string why;
  EXPECT_TRUE(book.check_invariants(&why)) << why;
}

TEST(OrderBook, DepositOnPopulatedLevelKeepsQuotes) {
  auto book = small_book();
  book.seed_level(-3, Side::Buy, 3);
  book.seed_level(4, Side::Sell, 1);
  book.finish_seeding();
  book.deposit_at(-3, BookSide::Buy);
  EXPECT_EQ(book.volume_at(-3), 4);
  EXPECT_EQ(book.best_bid(), -3);
  EXPECT_EQ(book.best_ask(), 4);
}

TEST(OrderBook, DepositSidesRespectAdmissibleRange) {
  auto book = small_book();
  book.seed_level(-2, Side::Buy, 1);
  book.seed_level(3, Side::Sell, 1);
  book.finish_seeding();
  Rng rng(21, 0);
  for (int i = 0; i < 2000; ++i) {
    const BookSide side = rng.bernoulli(0.5) ? BookSide::Buy : BookSide::Sell;
    const int64_t level = book.deposit(side, rng);
    ASSERT_NE(level, kNoQuote);
    if (side == BookSide::Buy) ASSERT_LT(level, book.best_ask());
    else ASSERT_GT(level, book.best_bid());
  }
  std::string why;
  EXPECT_TRUE(book.check_invariants(&why)) << why;
}

TEST(OrderBook, CancelRecedesQuote) {
  auto book = small_book();
  book.seed_level(-4, Side::Buy, 1);
  book.seed_level(-7, Side::Buy, 2);
  book.seed_level(6, Side::Sell, 1);
  book.finish_seeding();
  // remove the single unit at the best bid deterministically: it is the last
  // unit in rank order
  Rng rng(3, 0);
  for (int guard = 0; guard < 1000 && book.best_bid() == -4; ++guard) {
    auto out = book.cancel(rng);
    ASSERT_NE(out.kind, CancelOutcome::EmptyBook);
    if (out.level != -4)  // put it back
      book.deposit_at(out.level, out.level < 0 ? BookSide::Buy : BookSide::Sell);
  }
  EXPECT_EQ(book.best_bid(), -7);
}

// Uniform-unit selection: pick frequencies over volumes [1,2,3] within 3.5
// sigma of [1/6, 2/6, 3/6].
TEST(OrderBook, CancelIsVolumeProportional) {
  auto book = small_book();
  book.seed_level(-3, Side::Buy, 1);
  book.seed_level(-2, Side::Buy, 2);
  book.seed_level(-1, Side::Buy, 3);
  book.seed_level(5, Side::Sell, 1);
  book.finish_seeding();
  Rng rng(1234, 0);
  const int n = 1000000;
  int64_t cnt[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const auto out = book.cancel(rng);
    ASSERT_EQ(out.kind, CancelOutcome::Removed);
    if (out.level >= -3 && out.level <= -1) ++cnt[out.level + 3];
    book.deposit_at(out.level, out.level < 0 ? BookSide::Buy : BookSide::Sell);
  }
  const double probs[3] = {1 / 7.0, 2 / 7.0, 3 / 7.0};  // one sell unit also in play
  for (int k = 0; k < 3; ++k) {
    const double se = std::sqrt(probs[k] * (1 - probs[k]) * n);
    EXPECT_NEAR(static_cast<double>(cnt[k]), probs[k] * n, 3.5 * se) << "level " << k - 3;
  }
}

TEST(OrderBook, ExecutePartialKeepsQuote) {
  auto book = small_book();
  book.seed_level(-1, Side::Buy, 4);
  book.seed_level(1, Side::Sell, 5);
  book.finish_seeding();
  Rng rng(2, 0);
  const TradeRecord tr = book.execute_market(+1, 2, rng);
  EXPECT_EQ(tr.exec_level, 1);
  EXPECT_EQ(tr.pre_ask, 1);
  EXPECT_EQ(tr.pre_bid, -1);
  EXPECT_EQ(book.volume_at(1), 3);
  EXPECT_EQ(book.best_ask(), 1);
  EXPECT_EQ(book.last_trade_level(), 1);
}

TEST(OrderBook, ExecuteEmptiesLevelAndMovesQuote) {
  auto book = small_book();
  book.seed_level(-1, Side::Buy, 4);
  book.seed_level(1, Side::Sell, 1);
  book.seed_level(4, Side::Sell, 2);
  book.finish_seeding();
  Rng rng(2, 0);
  const TradeRecord tr = book.execute_market(+1, 1, rng);
  EXPECT_EQ(tr.volume, 1);
  EXPECT_EQ(book.best_ask(), 4);
  EXPECT_EQ(book.side_at(1), Side::Empty);
  const TradeRecord tr2 = book.execute_market(-1, 4, rng);
  EXPECT_EQ(tr2.exec_level, -1);
  EXPECT_FALSE(book.has_bid());
}

TEST(OrderBook, RandomEventSequenceKeepsInvariants) {
  auto book = small_book(-40, 81);
  for (int64_t l = -40; l <= -1; ++l) book.seed_level(l, Side::Buy, 2);
  for (int64_t l = 1; l <= 40; ++l) book.seed_level(l, Side::Sell, 2);
  book.finish_seeding();
  Rng rng(99, 0);
  int64_t expected_total = book.total_volume();
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    if (u < 0.45) {
      const BookSide side = rng.bernoulli(0.5) ? BookSide::Buy : BookSide::Sell;
      if (book.deposit(side, rng) != kNoQuote) ++expected_total;
    } else if (u < 0.9) {
      if (book.cancel(rng).kind == CancelOutcome::Removed) --expected_total;
    } else {
      const int sign = rng.bernoulli(0.5) ? 1 : -1;
      const int64_t best = sign > 0 ? book.best_ask() : book.best_bid();
      if (best == kNoQuote) continue;
      const int64_t avail = book.volume_at(best);
      const int64_t v = 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(avail)));
      const TradeRecord tr = book.execute_market(sign, v, rng);
      ASSERT_LE(tr.volume, avail);  // no trade-through
      expected_total -= v;
    }
    ASSERT_EQ(book.total_volume(), expected_total);
    if (i % 500 == 0) {
      std::string why;
      ASSERT_TRUE(book.check_invariants(&why)) << why << " at step " << i;
    }
    if (!book.has_bid() || !book.has_ask()) break;  // window would need extension
  }
}

TEST(OrderBook, ExtensionSeedsAtStationaryMean) {
  const double mean = 50.0;
  BookParams p;
  p.tick = 0.01;
  p.seed_mean = mean;
  p.width_cap = 1 << 20;
  Rng rng(7, 0);
  double sum = 0;
  int64_t levels = 0;
  OrderBook book(p, -8, 17);
  book.seed_level(-1, Side::Buy, 1);
  book.seed_level(1, Side::Sell, 1);
  book.finish_seeding();
  for (int rep = 0; rep < 200; ++rep) {
    const int64_t hi_before = book.hi();
    book.extend_window(+1, 64, rng);
    for (int64_t l = hi_before + 1; l <= book.hi(); ++l) {
      sum += static_cast<double>(book.volume_at(l));
      ++levels;
    }
  }
  const double avg = sum / static_cast<double>(levels);
  EXPECT_NEAR(avg, mean, 3.5 * std::sqrt(mean / static_cast<double>(levels)));
}

TEST(OrderBook, TrimNeverTouchesQuotesRegion) {
  BookParams p;
  p.tick = 0.01;
  p.seed_mean = 5.0;
  p.width_cap = 256;
  OrderBook book(p, -128, 257);
  book.seed_level(-1, Side::Buy, 3);
  book.seed_level(2, Side::Sell, 3);
  book.finish_seeding();
  Rng rng(13, 0);
  for (int rep = 0; rep < 50; ++rep) {
    book.extend_window(rep % 2 ? +1 : -1, 32, rng);
    ASSERT_LE(book.lo(), book.best_bid());
    ASSERT_GE(book.hi(), book.best_ask());
    ASSERT_LE(book.width(), p.width_cap + 64);
    std::string why;
    ASSERT_TRUE(book.check_invariants(&why)) << why;
  }
}

// Stationary occupancy with trading disabled: run the pure deposition /
// cancellation birth-death dynamics and compare per-level moments with the
// Poisson(lambda w/nu) equilibrium.
TEST(OrderBook, BirthDeathEquilibrium) {
  const double lambda_w = 8e-3, nu = 1e-3;  // depth 8
  const double mean = lambda_w / nu;
  BookParams p;
  p.tick = 0.01;
  p.seed_mean = mean;
  p.width_cap = 1 << 20;
  const int64_t w = 100;
  OrderBook book(p, 0, w);
  Rng rng(55, 0);
  // seed at equilibrium, bid side only (no trades, sides never interact)
  for (int64_t l = 0; l < w; ++l) book.seed_level(l, Side::Buy, rng.poisson(mean));
  book.finish_seeding();

  double tau = 0;
  const double tau_end = 220.0 / nu;
  double next_sample = 20.0 / nu;  // skip a couple of relaxation times
  double s = 0, s2 = 0;
  int64_t n = 0;
  while (tau < tau_end) {
    const double r_dep = lambda_w * static_cast<double>(w);
    const double r_can = nu * static_cast<double>(book.total_volume());
    tau += rng.exponential(r_dep + r_can);
    if (rng.uniform() * (r_dep + r_can) < r_dep) {
      const int64_t level = static_cast<int64_t>(rng.below(static_cast<uint64_t>(w)));
      book.deposit_at(level, BookSide::Buy);
    } else if (book.total_volume() > 0) {
      book.cancel(rng);
    }
    if (tau >= next_sample) {
      next_sample += 1.0 / nu;  // one memory time apart
      for (int64_t l = 0; l < w; ++l) {
        const auto v = static_cast<double>(book.volume_at(l));
        s += v;
        s2 += v * v;
        ++n;
      }
    }
  }
  ASSERT_GE(n, 10000);
  const double m = s / static_cast<double>(n);
  const double var = s2 / static_cast<double>(n) - m * m;
  const double nn = static_cast<double>(n);
  EXPECT_NEAR(m, mean, 3.0 * std::sqrt(mean / nn));
  EXPECT_NEAR(var, mean, 3.5 * std::sqrt((mean + 2 * mean * mean) / nn));
}

// Flagged units: immune to cancellation, consumed by trades in expectation
// proportionally to their share of the level.
TEST(OrderBook, FlaggedUnits) {
  Rng rng(31, 0);
  double consumed = 0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    auto book = small_book();
    book.seed_level(-1, Side::Buy, 12);
    book.seed_level(1, Side::Sell, 1);
    book.finish_seeding();
    book.deposit_at(-1, BookSide::Buy, 6, /*flagged=*/true);  // 6 of 18 flagged
    const TradeRecord tr = book.execute_market(-1, 9, rng);
    ASSERT_GE(tr.flagged_consumed, 0);
    ASSERT_LE(tr.flagged_consumed, 6);
    ASSERT_EQ(book.flagged_volume(), 6 - tr.flagged_consumed);
    consumed += static_cast<double>(tr.flagged_consumed);
  }
  // hypergeometric mean: 9 * 6/18 = 3; var = 9*(1/3)*(2/3)*(9/17)
  const double se = std::sqrt(9.0 * (1.0 / 3) * (2.0 / 3) * (9.0 / 17.0) / reps);
  EXPECT_NEAR(consumed / reps, 3.0, 3.5 * se);
}

TEST(OrderBook, FlaggedNeverCancelled) {
  auto book = small_book();
  book.seed_level(-1, Side::Buy, 0);
  book.seed_level(1, Side::Sell, 4);
  book.finish_seeding();
  book.deposit_at(-1, BookSide::Buy, 5, /*flagged=*/true);
  Rng rng(8, 0);
  int removed = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto out = book.cancel(rng);
    if (out.kind == CancelOutcome::Removed) {
      ASSERT_GT(out.level, 0) << "flagged bid unit was cancelled";
      ++removed;
      book.deposit_at(out.level, BookSide::Sell);
    }
  }
  EXPECT_EQ(book.flagged_volume(), 5);
  EXPECT_GT(removed, 0);
}

TEST(OrderBook, SnapshotCsv) {
  auto book = small_book();
  book.seed_level(-2, Side::Buy, 7);
  book.seed_level(3, Side::Sell, 1);
  book.finish_seeding();
  std::ostringstream os;
  book.snapshot_csv(os);
  EXPECT_EQ(os.str(), "level_price,side,volume\n-0.02,BUY,7\n0.03,SELL,1\n");
}
