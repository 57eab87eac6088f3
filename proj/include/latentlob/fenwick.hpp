#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "latentlob/rng.hpp"

namespace latentlob {

/// Fenwick (binary indexed) tree over non-negative integer weights with
/// O(log n) point update, prefix sum and k-th unit selection. Backs the
/// volume-proportional sampling of the order book.
class Fenwick {
 public:
  Fenwick() = default;

  explicit Fenwick(size_t n) { reset(n); }

  void reset(size_t n) {
    n_ = n;
    tree_.assign(n + 1, 0);
    total_ = 0;
  }

  /// Rebuild from raw values in O(n).
  void build(const std::vector<int64_t>& values) {
    n_ = values.size();
    tree_.assign(n_ + 1, 0);
    total_ = 0;
    for (size_t i = 0; i < n_; ++i) {
      tree_[i + 1] += values[i];
      total_ += values[i];
      const size_t parent = (i + 1) + ((i + 1) & -(i + 1));
      if (parent <= n_) tree_[parent] += tree_[i + 1];
    }
  }

  size_t size() const { return n_; }
  int64_t total() const { return total_; }

  void add(size_t i, int64_t delta) {
    assert(i < n_);
    total_ += delta;
    for (size_t j = i + 1; j <= n_; j += j & -j) tree_[j] += delta;
  }

  /// Sum of values[0..i).
  int64_t prefix(size_t i) const {
    int64_t s = 0;
    for (size_t j = i; j > 0; j -= j & -j) s += tree_[j];
    return s;
  }

  int64_t value(size_t i) const { return prefix(i + 1) - prefix(i); }

  /// Index of the unit with rank k (0-based, k < total): the smallest i with
  /// prefix(i+1) > k.
  size_t kth(int64_t k) const {
    assert(k >= 0 && k < total_);
    size_t idx = 0;
    for (size_t step = top_mask(); step > 0; step >>= 1) {
      const size_t next = idx + step;
      if (next <= n_ && tree_[next] <= k) {
        idx = next;
        k -= tree_[next];
      }
    }
    return idx;  // idx is the count of levels fully skipped
  }

  /// Draw a unit uniformly at random; returns its index.
  size_t sample(Rng& rng) const {
    return kth(static_cast<int64_t>(rng.below(static_cast<uint64_t>(total_))));
  }

 private:
  size_t top_mask() const {
    size_t m = 1;
    while ((m << 1) <= n_) m <<= 1;
    return m;
  }

  size_t n_ = 0;
  int64_t total_ = 0;
  std::vector<int64_t> tree_;
};

}  // namespace latentlob
