#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "latentlob/rng.hpp"

namespace latentlob {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precomputed inverse-CDF table for the trend-length law of the correlated
/// sign process. Trend lengths follow the discrete power law
///     p(L) = L^-(2+gamma) / zeta(2+gamma),  L >= 1,
/// whose tail P(L > x) ~ x^-(1+gamma) yields a sign autocorrelation decaying
/// as t^-gamma. The table is exact up to `kTableMax`; the (tiny) remaining
/// tail is sampled from the continuous Pareto continuation.
class TrendTable {
 public:
  static constexpr uint64_t kTableMax = 1'000'000;

  explicit TrendTable(double gamma) : gamma_(gamma) {
    if (!(gamma > 0)) throw ConfigError("trend table requires gamma > 0");
    cdf_.resize(kTableMax);
    eq_cdf_.resize(kTableMax);
    const double a = 2.0 + gamma;
    long double sum = 0.0L;
    for (uint64_t l = 1; l <= kTableMax; ++l) {
      sum += std::pow(static_cast<long double>(l), -static_cast<long double>(a));
      cdf_[l - 1] = static_cast<double>(sum);
    }
    // Euler-Maclaurin estimate of the truncated tail mass.
    const long double edge = static_cast<long double>(kTableMax) + 0.5L;
    const long double tail = std::pow(edge, -(1.0L + gamma)) / (1.0L + gamma);
    const double norm = static_cast<double>(sum + tail);
    for (double& c : cdf_) c /= norm;

    // Equilibrium (age-biased) law of the remaining length of the trend in
    // progress at a random time: P(r) = P(L >= r) / E[L]. Makes a stream
    // started mid-history exactly stationary.
    long double cum = 0.0L;
    for (uint64_t r = 1; r <= kTableMax; ++r) {
      const long double ccdf_r = 1.0L - (r >= 2 ? cdf_[r - 2] : 0.0L);
      cum += ccdf_r;
      eq_cdf_[r - 1] = static_cast<double>(cum);
    }
    // residual mass of the remaining-length tail: sum_{r>max} P(L>=r), with
    // P(L>=r) ~ tail/norm at the table edge and a further 1/gamma integral.
    const long double eq_tail = (tail / norm) * edge / gamma;
    mean_length_ = static_cast<double>(cum + eq_tail);
    for (double& c : eq_cdf_) c /= mean_length_;
  }

  uint64_t sample(Rng& rng) const {
    const double u = rng.uniform();
    if (u >= cdf_.back()) {
      // Pareto continuation beyond the table.
      const double v = (u - cdf_.back()) / (1.0 - cdf_.back());
      const double x = (static_cast<double>(kTableMax) + 0.5) *
                       std::pow(1.0 - v, -1.0 / (1.0 + gamma_));
      const double capped = std::min(x, 9.0e15);
      return static_cast<uint64_t>(capped + 0.5);
    }
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<uint64_t>(it - cdf_.begin()) + 1;
  }

  /// Remaining length of the in-progress trend under the equilibrium
  /// (stationary renewal) law.
  uint64_t sample_equilibrium_remaining(Rng& rng) const {
    const double u = rng.uniform();
    if (u >= eq_cdf_.back()) {
      const double v = (u - eq_cdf_.back()) / (1.0 - eq_cdf_.back());
      const double x = (static_cast<double>(kTableMax) + 0.5) * std::pow(1.0 - v, -1.0 / gamma_);
      return static_cast<uint64_t>(std::min(x, 9.0e15) + 0.5);
    }
    const auto it = std::lower_bound(eq_cdf_.begin(), eq_cdf_.end(), u);
    return static_cast<uint64_t>(it - eq_cdf_.begin()) + 1;
  }

  /// Exact pmf of the sampled law (table range), for oracle checks.
  double pmf(uint64_t l) const {
    if (l == 0 || l > kTableMax) return 0.0;
    return (l == 1 ? cdf_[0] : cdf_[l - 1] - cdf_[l - 2]);
  }

  double gamma() const { return gamma_; }
  double mean_length() const { return mean_length_; }

 private:
  double gamma_;
  double mean_length_ = 0.0;
  std::vector<double> cdf_;
  std::vector<double> eq_cdf_;
};

enum class SignMode { LMF, IID, CONST };

/// Market-order sign generator: long-range-correlated trends (LMF), fair
/// i.i.d. coins, or a constant sign (degenerate stream for tests and
/// debugging).
class SignStream {
 public:
  static SignStream lmf(std::shared_ptr<const TrendTable> table) {
    SignStream s;
    s.mode_ = SignMode::LMF;
    s.table_ = std::move(table);
    return s;
  }

  static SignStream iid() {
    SignStream s;
    s.mode_ = SignMode::IID;
    return s;
  }

  static SignStream constant(int sign) {
    SignStream s;
    s.mode_ = SignMode::CONST;
    s.trend_sign_ = sign;
    return s;
  }

  int next(Rng& rng) {
    switch (mode_) {
      case SignMode::IID:
        return rng.sign();
      case SignMode::CONST:
        return trend_sign_;
      case SignMode::LMF:
        if (remaining_ == 0) {
          // first trend is age-biased so the stream starts in equilibrium
          remaining_ = fresh_ ? table_->sample_equilibrium_remaining(rng) : table_->sample(rng);
          fresh_ = false;
          trend_sign_ = rng.sign();
        }
        --remaining_;
        return trend_sign_;
    }
    return 1;
  }

  SignMode mode() const { return mode_; }

 private:
  SignMode mode_ = SignMode::IID;
  int trend_sign_ = 1;
  bool fresh_ = true;
  uint64_t remaining_ = 0;
  std::shared_ptr<const TrendTable> table_;
};

enum class PolicyKind { ZETA, PSI, UNIT, GREEDY };

/// Market-order volume policy. Given the volume at the opposite best, returns
/// the executed volume, always in [1, v_best].
class VolumePolicy {
 public:
  static VolumePolicy zeta_law(double zeta) {
    if (!(zeta > 0)) throw ConfigError("zeta-law volume policy requires zeta > 0");
    VolumePolicy p;
    p.kind_ = PolicyKind::ZETA;
    p.zeta_ = zeta;
    return p;
  }

  static VolumePolicy psi_law(double psi) {
    if (!(psi >= 0.0 && psi <= 1.0)) throw ConfigError("psi-law volume policy requires psi in [0,1]");
    VolumePolicy p;
    p.kind_ = PolicyKind::PSI;
    p.psi_ = psi;
    return p;
  }

  static VolumePolicy unit() { return VolumePolicy{}; }

  static VolumePolicy greedy() {
    VolumePolicy p;
    p.kind_ = PolicyKind::GREEDY;
    return p;
  }

  int64_t draw(int64_t v_best, Rng& rng) const {
    switch (kind_) {
      case PolicyKind::UNIT:
        return 1;
      case PolicyKind::GREEDY:
        return v_best;
      case PolicyKind::PSI: {
        // +1e-9 guards integer powers against FP dust (psi=0.5, v=100 -> 10).
        const auto v = static_cast<int64_t>(
            std::floor(std::pow(static_cast<double>(v_best), psi_) + 1e-9));
        return std::max<int64_t>(v, 1);
      }
      case PolicyKind::ZETA:
        return from_fraction(rng.uniform(), v_best);
    }
    return 1;
  }

  /// Deterministic core of the zeta law: f = 1 - (1-u)^(1/zeta), volume
  /// max(floor(f*v_best), 1).
  int64_t from_fraction(double u, int64_t v_best) const {
    const double f = 1.0 - std::pow(1.0 - u, 1.0 / zeta_);
    const auto v = static_cast<int64_t>(std::floor(f * static_cast<double>(v_best)));
    return std::max<int64_t>(std::min(v, v_best), 1);
  }

  PolicyKind kind() const { return kind_; }
  double zeta() const { return zeta_; }
  double psi() const { return psi_; }

 private:
  PolicyKind kind_ = PolicyKind::UNIT;
  double zeta_ = 0.0;
  double psi_ = 0.0;
};

enum class BookSide : uint8_t { Buy = 1, Sell = 2 };

/// Deposition-side chooser of the stimulated-refill model: after a market
/// order of sign eps, the next limit order lands on the ask side with
/// probability (1 + alpha*eps)/2 and on the bid side otherwise.
class RefillPolicy {
 public:
  explicit RefillPolicy(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("refill bias alpha must lie in [0,1]");
  }

  /// `last_sign` is the sign of the last market order, or 0 before any trade
  /// (fair coin in that case).
  BookSide side(int last_sign, Rng& rng) const {
    const double p_ask = 0.5 * (1.0 + alpha_ * static_cast<double>(last_sign));
    return rng.uniform() < p_ask ? BookSide::Sell : BookSide::Buy;
  }

  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

}  // namespace latentlob
