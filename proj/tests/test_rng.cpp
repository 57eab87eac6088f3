#include "latentlob/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace latentlob;

TEST(Rng, ReproducibleAndStreamsDiffer) {
  Rng a(42, 0), b(42, 0), c(42, 1);
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    if (x != c.next_u64()) any_diff = true;
  }
  EXPECT_TRUE(any_diff);
}

TEST(Rng, UniformRange) {
  Rng r(1, 0);
  double mn = 1, mx = 0, sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    mn = std::min(mn, u);
    mx = std::max(mx, u);
    sum += u;
  }
  EXPECT_GE(mn, 0.0);
  EXPECT_LT(mx, 1.0);
  // mean 1/2, se = 1/sqrt(12 n)
  EXPECT_NEAR(sum / n, 0.5, 3.0 / std::sqrt(12.0 * n));
}

TEST(Rng, BelowIsUniform) {
  Rng r(7, 0);
  const uint64_t m = 13;
  std::vector<int64_t> cnt(m, 0);
  const int n = 130000;
  for (int i = 0; i < n; ++i) ++cnt[r.below(m)];
  const double expect = static_cast<double>(n) / m;
  const double se = std::sqrt(expect * (1.0 - 1.0 / m));
  for (uint64_t k = 0; k < m; ++k) EXPECT_NEAR(cnt[k], expect, 3.5 * se) << "bucket " << k;
}

TEST(Rng, ExponentialMean) {
  Rng r(3, 0);
  const double rate = 2.5;
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.exponential(rate);
  EXPECT_NEAR(sum / n, 1.0 / rate, 3.0 / (rate * std::sqrt(n)));
}

// Mean and variance of the Poisson sampler across the Knuth and PTRD branches.
TEST(Rng, PoissonMoments) {
  for (double mean : {0.5, 5.0, 50.0, 5000.0}) {
    Rng r(11, static_cast<uint64_t>(mean));
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const auto v = static_cast<double>(r.poisson(mean));
      s += v;
      s2 += v * v;
    }
    const double m = s / n;
    const double var = s2 / n - m * m;
    EXPECT_NEAR(m, mean, 3.0 * std::sqrt(mean / n)) << "mean " << mean;
    const double var_se = std::sqrt((mean + 2.0 * mean * mean) / n);
    EXPECT_NEAR(var, mean, 3.5 * var_se) << "mean " << mean;
  }
}

TEST(Rng, PoissonPmfSmallMean) {
  // check the head of the pmf against exact values at mean 3
  const double mean = 3.0;
  Rng r(13, 0);
  const int n = 400000;
  std::vector<int64_t> cnt(12, 0);
  for (int i = 0; i < n; ++i) {
    const int64_t v = r.poisson(mean);
    if (v < static_cast<int64_t>(cnt.size())) ++cnt[v];
  }
  double p = std::exp(-mean);
  for (int k = 0; k < 10; ++k) {
    const double expect = p * n;
    const double se = std::sqrt(expect * (1 - p));
    EXPECT_NEAR(cnt[k], expect, 4.0 * se) << "k=" << k;
    p *= mean / (k + 1);
  }
}
