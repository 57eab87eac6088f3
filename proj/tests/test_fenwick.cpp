#include "latentlob/fenwick.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace latentlob;

TEST(Fenwick, PrefixSumsMatchBruteForce) {
  Rng rng(5, 0);
  const size_t n = 137;
  Fenwick f(n);
  std::vector<int64_t> ref(n, 0);
  for (int iter = 0; iter < 5000; ++iter) {
    const size_t i = rng.below(n);
    const int64_t delta = ref[i] > 0 && rng.bernoulli(0.4)
                              ? -static_cast<int64_t>(rng.below(static_cast<uint64_t>(ref[i])) + 1)
                              : static_cast<int64_t>(rng.below(5) + 1);
    f.add(i, delta);
    ref[i] += delta;
    if (iter % 97 == 0) {
      int64_t run = 0;
      for (size_t j = 0; j < n; ++j) {
        run += ref[j];
        ASSERT_EQ(f.prefix(j + 1), run);
      }
      ASSERT_EQ(f.total(), run);
    }
  }
}

TEST(Fenwick, BuildMatchesAdds) {
  std::vector<int64_t> vals = {3, 0, 7, 1, 0, 0, 11, 2};
  Fenwick a(vals.size()), b;
  for (size_t i = 0; i < vals.size(); ++i) a.add(i, vals[i]);
  b.build(vals);
  for (size_t i = 0; i <= vals.size(); ++i) EXPECT_EQ(a.prefix(i), b.prefix(i));
  EXPECT_EQ(a.total(), b.total());
}

TEST(Fenwick, KthSelectsByRank) {
  std::vector<int64_t> vals = {2, 0, 6, 1};
  Fenwick f;
  f.build(vals);
  // ranks 0..1 -> level 0, 2..7 -> level 2, 8 -> level 3
  for (int64_t k = 0; k < 2; ++k) EXPECT_EQ(f.kth(k), 0u);
  for (int64_t k = 2; k < 8; ++k) EXPECT_EQ(f.kth(k), 2u);
  EXPECT_EQ(f.kth(8), 3u);
}

// Volume-proportional sampling: frequencies over [1,2,3] within 3 sigma of
// [1/6, 2/6, 3/6].
TEST(Fenwick, SampleFrequencies) {
  Fenwick f;
  f.build({1, 2, 3});
  Rng rng(17, 0);
  const int n = 1000000;
  int64_t cnt[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) ++cnt[f.sample(rng)];
  for (int k = 0; k < 3; ++k) {
    const double p = (k + 1) / 6.0;
    const double se = std::sqrt(p * (1 - p) * n);
    EXPECT_NEAR(cnt[k], p * n, 3.0 * se) << "level " << k;
  }
}
