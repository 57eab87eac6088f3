#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "latentlob/flow.hpp"

namespace latentlob {

/// Flat `[section] key = value` config text. '#' and ';' start comments.
class IniFile {
 public:
  static IniFile parse(const std::string& text) {
    IniFile ini;
    ini.text_ = text;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const size_t cpos = line.find_first_of("#;");
      if (cpos != std::string::npos) line.erase(cpos);
      std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const size_t eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string val = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      ini.values_[section.empty() ? key : section + "." + key] = val;
    }
    return ini;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ConfigError("missing required key \"" + key + "\"");
    }
    try {
      size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("key \"" + key + "\": not a number: " + it->second);
    }
  }

  int64_t get_int(const std::string& key, std::optional<int64_t> fallback = {}) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ConfigError("missing required key \"" + key + "\"");
    }
    try {
      size_t pos = 0;
      const int64_t v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError("key \"" + key + "\": not an integer: " + it->second);
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key \"" + key + "\": not a boolean: " + v);
  }

  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback = {}) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream is(it->second);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (...) {
        throw ConfigError("key \"" + key + "\": bad list element: " + item);
      }
    }
    return out;
  }

  const std::string& text() const { return text_; }

 private:
  static std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  std::map<std::string, std::string> values_;
  std::string text_;
};

/// Full parameter set for one simulated market.
struct ExperimentConfig {
  // [model] rates in 1/s; lambda_w is the deposition rate per tick.
  double mu = 0.1;
  double lambda_w = 5e-3;
  double nu = 1e-7;
  double tick = 0.01;
  SignMode sign_mode = SignMode::LMF;
  double gamma = 0.5;
  PolicyKind bg_kind = PolicyKind::ZETA;
  double zeta = 0.95;
  double psi = 0.0;
  double alpha = 0.0;

  // guards and window plumbing
  int64_t max_depth = 1'000'000;
  int64_t window_halfwidth = 0;  // ticks, 0 = automatic
  double edge_margin_frac = 0.10;

  // [run]
  uint64_t seed = 1;
  int replicas = 1;
  int threads = 0;  // 0 = auto
  double warmup_time = -1.0;  // seconds, <0 = automatic
  bool stationary_init = true;
  uint64_t horizon_trades = 100'000;

  double depth_mean() const { return lambda_w / nu; }
  double seed_mean() const {
    const double d = depth_mean();
    return d > static_cast<double>(max_depth) ? static_cast<double>(max_depth) : d;
  }
  bool depth_capped() const { return depth_mean() > static_cast<double>(max_depth); }

  /// Memory time of the book.
  double tau_nu() const { return 1.0 / nu; }

  double effective_warmup() const {
    if (warmup_time >= 0) return warmup_time;
    return stationary_init ? 0.2 / nu : 5.0 / nu;
  }

  /// A-priori scale of the liquidity hole, used only to size the window:
  /// p* = sqrt(D/2nu) with D estimated as mu^3/lambda^2.
  double pstar_estimate() const {
    const double lambda = lambda_w / tick;
    const double d_est = mu * mu * mu / (lambda * lambda);
    return std::sqrt(d_est / (2.0 * nu));
  }

  int64_t effective_halfwidth() const {
    if (window_halfwidth > 0) return window_halfwidth;
    const double spread_est = mu * tick / lambda_w;
    const double hw = 4.0 * std::max(pstar_estimate(), spread_est) / tick;
    return std::max<int64_t>(static_cast<int64_t>(hw) + 1, 64);
  }

  VolumePolicy background_policy() const {
    switch (bg_kind) {
      case PolicyKind::ZETA:
        return VolumePolicy::zeta_law(zeta);
      case PolicyKind::PSI:
        return VolumePolicy::psi_law(psi);
      case PolicyKind::UNIT:
        return VolumePolicy::unit();
      case PolicyKind::GREEDY:
        return VolumePolicy::greedy();
    }
    return VolumePolicy::unit();
  }

  static ExperimentConfig from_ini(const IniFile& ini) {
    ExperimentConfig c;
    c.mu = ini.get_double("model.mu");
    c.lambda_w = ini.get_double("model.lambda_w");
    c.nu = ini.get_double("model.nu");
    c.tick = ini.get_double("model.tick", 0.01);
    c.gamma = ini.get_double("model.gamma", 0.5);
    c.alpha = ini.get_double("model.alpha", 0.0);
    const std::string signs = ini.get_string("model.signs", "lmf");
    if (signs == "lmf") c.sign_mode = SignMode::LMF;
    else if (signs == "iid") c.sign_mode = SignMode::IID;
    else throw ConfigError("key \"model.signs\": expected lmf or iid, got " + signs);

    const bool has_zeta = ini.has("model.zeta");
    const bool has_psi = ini.has("model.psi");
    const std::string pol = ini.get_string("model.policy", "");
    if (has_zeta && has_psi) throw ConfigError("keys \"model.zeta\" and \"model.psi\": exactly one may be set");
    if (pol == "unit") c.bg_kind = PolicyKind::UNIT;
    else if (pol == "greedy") c.bg_kind = PolicyKind::GREEDY;
    else if (has_psi) {
      c.bg_kind = PolicyKind::PSI;
      c.psi = ini.get_double("model.psi");
    } else {
      c.bg_kind = PolicyKind::ZETA;
      c.zeta = ini.get_double("model.zeta", 0.95);
    }
    c.max_depth = ini.get_int("model.max_depth", 1'000'000);
    c.window_halfwidth = ini.get_int("model.window_halfwidth", 0);

    c.seed = static_cast<uint64_t>(ini.get_int("run.seed", 1));
    c.replicas = static_cast<int>(ini.get_int("run.replicas", 1));
    c.threads = static_cast<int>(ini.get_int("run.threads", 0));
    c.warmup_time = ini.get_double("run.warmup", -1.0);
    c.stationary_init = ini.get_bool("run.stationary_init", true);
    c.horizon_trades = static_cast<uint64_t>(ini.get_int("run.horizon_trades", 100'000));
    c.validate();
    return c;
  }

  void validate() const {
    if (!(mu > 0)) throw ConfigError("key \"model.mu\": must be > 0");
    if (!(lambda_w > 0)) throw ConfigError("key \"model.lambda_w\": must be > 0");
    if (!(nu > 0)) throw ConfigError("key \"model.nu\": must be > 0");
    if (!(tick > 0)) throw ConfigError("key \"model.tick\": must be > 0");
    if (!(alpha >= 0 && alpha <= 1)) throw ConfigError("key \"model.alpha\": must lie in [0,1]");
    if (sign_mode == SignMode::LMF && !(gamma > 0)) throw ConfigError("key \"model.gamma\": must be > 0 in lmf mode");
    if (bg_kind == PolicyKind::ZETA && !(zeta > 0)) throw ConfigError("key \"model.zeta\": must be > 0");
    if (bg_kind == PolicyKind::PSI && !(psi >= 0 && psi <= 1)) throw ConfigError("key \"model.psi\": must lie in [0,1]");
    if (replicas < 1) throw ConfigError("key \"run.replicas\": must be >= 1");
    if (max_depth < 1) throw ConfigError("key \"model.max_depth\": must be >= 1");
  }
};

enum class MetaStyle { MARKET, LIMIT };

/// One meta-order: an extra agent buying Q units (or trading for a fixed
/// duration) at event rate mu*phi on top of the background flow.
struct MetaOrderSpec {
  MetaStyle style = MetaStyle::MARKET;
  double phi = 0.5;
  PolicyKind trader_kind = PolicyKind::ZETA;
  double zeta_prime = 0.95;
  double psi_prime = 0.0;
  double fraction = 0.5;  // limit-style deterministic f
  int64_t q = 0;          // FIXED_Q target, 0 = none
  double duration = 0.0;  // FIXED_T seconds, 0 = none
  uint64_t post_horizon = 256;
  uint64_t max_trades = 2'000'000;  // safety horizon; exceeded -> incomplete

  double participation() const { return phi / (1.0 + phi); }

  VolumePolicy trader_policy() const {
    switch (trader_kind) {
      case PolicyKind::ZETA:
        return VolumePolicy::zeta_law(zeta_prime);
      case PolicyKind::PSI:
        return VolumePolicy::psi_law(psi_prime);
      case PolicyKind::UNIT:
        return VolumePolicy::unit();
      case PolicyKind::GREEDY:
        return VolumePolicy::greedy();
    }
    return VolumePolicy::unit();
  }

  static MetaOrderSpec from_ini(const IniFile& ini) {
    MetaOrderSpec m;
    const std::string style = ini.get_string("meta.style", "market");
    if (style == "market") m.style = MetaStyle::MARKET;
    else if (style == "limit") m.style = MetaStyle::LIMIT;
    else throw ConfigError("key \"meta.style\": expected market or limit, got " + style);
    m.phi = ini.get_double("meta.phi");
    const std::string pol = ini.get_string("meta.policy", "zeta");
    if (pol == "zeta") {
      m.trader_kind = PolicyKind::ZETA;
      m.zeta_prime = ini.get_double("meta.zeta_prime", 0.95);
    } else if (pol == "psi") {
      m.trader_kind = PolicyKind::PSI;
      m.psi_prime = ini.get_double("meta.psi_prime");
    } else if (pol == "unit") {
      m.trader_kind = PolicyKind::UNIT;
    } else if (pol == "greedy") {
      m.trader_kind = PolicyKind::GREEDY;
    } else {
      throw ConfigError("key \"meta.policy\": expected zeta, psi, unit or greedy, got " + pol);
    }
    m.fraction = ini.get_double("meta.fraction", 0.5);
    m.q = ini.get_int("meta.q", 0);
    m.duration = ini.get_double("meta.duration", 0.0);
    m.post_horizon = static_cast<uint64_t>(ini.get_int("meta.post_horizon", 256));
    m.validate();
    return m;
  }

  void validate() const {
    if (!(phi > 0)) throw ConfigError("key \"meta.phi\": must be > 0");
    const bool fixed_q = q > 0;
    const bool fixed_t = duration > 0;
    if (!fixed_q && !fixed_t) throw ConfigError("key \"meta.q\"/\"meta.duration\": one termination mode required");
    if (fixed_q && fixed_t && trader_kind != PolicyKind::UNIT)
      throw ConfigError("keys \"meta.q\" and \"meta.duration\": both fixed is only possible with unit execution");
    if (style == MetaStyle::LIMIT && !(fraction > 0 && fraction <= 1))
      throw ConfigError("key \"meta.fraction\": must lie in (0,1]");
    if (trader_kind == PolicyKind::ZETA && !(zeta_prime > 0))
      throw ConfigError("key \"meta.zeta_prime\": must be > 0");
    if (trader_kind == PolicyKind::PSI && !(psi_prime >= 0 && psi_prime <= 1))
      throw ConfigError("key \"meta.psi_prime\": must lie in [0,1]");
  }
};

}  // namespace latentlob
