#pragma once

#include <cmath>
#include <cstdint>

namespace latentlob {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator with hand-rolled distributions.
///
/// All samplers are implemented here (rather than <random>) so that a given
/// (seed, call sequence) produces the same stream on every platform and
/// compiler; replica-level reproducibility depends on it.
class Rng {
 public:
  Rng() : Rng(0, 0) {}

  /// Seed stream `stream` of a master seed. This is the documented
  /// replica-seed rule: state words are the first four outputs of a
  /// splitmix64 chain started at master + (stream+1)*0x9E3779B97F4A7C15.
  Rng(uint64_t master, uint64_t stream) {
    uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    for (auto& w : s_) w = splitmix64(z);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be >= 1.
  uint64_t below(uint64_t n) {
    // Lemire's multiply-shift with rejection on the biased slice.
    uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      const uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  /// Exponential waiting time with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  /// Poisson sample. Knuth's product method for small means, Hormann's
  /// PTRD transformed-rejection for large ones.
  int64_t poisson(double mean) {
    if (mean <= 0) return 0;
    if (mean < 10.0) return poisson_knuth(mean);
    return poisson_ptrd(mean);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  int64_t poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    int64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

  int64_t poisson_ptrd(double mean) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = uniform() - 0.5;
      double v = uniform();
      const double us = 0.5 - std::fabs(u);
      const auto k = static_cast<int64_t>(
          std::floor((2.0 * a / us + b) * u + mean + 0.43));
      if (us >= 0.07 && v <= vr) return k;
      if (k < 0 || (us < 0.013 && v > us)) continue;
      v = v * inv_alpha / (a / (us * us) + b);
      if (std::log(v) <=
          static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0)) {
        return k;
      }
    }
  }

  uint64_t s_[4];
};

}  // namespace latentlob
