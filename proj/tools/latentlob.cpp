// Reproducible experiment runner for the latent order-book simulator.
//
// Subcommands: simulate, sweep, impact, markov-check, propagator.
// Exit codes: 0 success, 2 config error, 3 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "latentlob/csv.hpp"
#include "latentlob/engine.hpp"
#include "latentlob/manifest.hpp"
#include "latentlob/measure.hpp"
#include "latentlob/propagator.hpp"
#include "latentlob/runner.hpp"
#include "latentlob/svg.hpp"
#include "latentlob/version.hpp"

namespace fs = std::filesystem;
using namespace latentlob;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string manifest_path;
  std::string out_dir = ".";
  int replicas = -1;
  int threads = -1;
  int64_t seed = -1;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "experiment config file (ini)");
  cmd->add_option("--from-manifest", a.manifest_path, "re-execute a previous run from its manifest");
  cmd->add_option("--out", a.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--replicas", a.replicas, "override run.replicas");
  cmd->add_option("--threads", a.threads, "override run.threads (env LATENTLOB_THREADS as fallback)");
  cmd->add_option("--seed", a.seed, "override run.seed");
  cmd->add_flag("--svg", a.svg, "also emit quick-look SVG charts");
}

struct LoadedRun {
  IniFile ini;
  ExperimentConfig cfg;
  MeasureConfig mc;
};

LoadedRun load_run(const CommonArgs& a, const std::string& subcommand) {
  std::string text;
  if (!a.manifest_path.empty()) {
    const RunManifest m = RunManifest::load(a.manifest_path);
    if (m.subcommand != subcommand)
      throw ConfigError("manifest was produced by subcommand \"" + m.subcommand + "\"");
    text = m.config_text;
  } else if (!a.config_path.empty()) {
    text = read_file(a.config_path);
  } else {
    throw ConfigError("missing required option --config (or --from-manifest)");
  }
  LoadedRun r{IniFile::parse(text), {}, {}};
  r.cfg = ExperimentConfig::from_ini(r.ini);
  r.mc = MeasureConfig::from_ini(r.ini);
  if (a.replicas > 0) r.cfg.replicas = a.replicas;
  if (a.threads >= 0) r.cfg.threads = a.threads;
  if (a.seed >= 0) r.cfg.seed = static_cast<uint64_t>(a.seed);
  if (r.cfg.depth_capped())
    std::cerr << "warning: lambda_w/nu = " << r.cfg.depth_mean()
              << " exceeds model.max_depth; occupancy capped at " << r.cfg.max_depth << "\n";
  return r;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void finish_manifest(RunManifest& man, const CommonArgs& a, const LoadedRun& run,
                     std::chrono::steady_clock::time_point t0) {
  man.config_text = run.ini.text();
  man.master_seed = run.cfg.seed;
  man.replicas = run.cfg.replicas;
  man.threads = run.cfg.threads;
  for (int r = 0; r < run.cfg.replicas; ++r)
    man.replica_seed_streams.push_back(static_cast<uint64_t>(r));
  man.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  man.write(join(a.out_dir, "manifest.json"));
}

int cmd_simulate(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const LoadedRun run = load_run(a, "simulate");
  fs::create_directories(a.out_dir);

  const SimulateResult res = simulate_experiment(run.cfg, run.mc);
  const auto sig = signature(res.variogram);
  const double d_per_s =
      estimate_diffusion(sig, run.cfg.mu, run.mc.d_lag_lo, run.mc.d_lag_hi);
  const ProfileCompare pc = profile_compare(res.profile, run.cfg, d_per_s);
  const auto hist = best_volume_histogram(res.bestvol);

  write_variogram_csv(join(a.out_dir, "variogram.csv"), sig);
  write_profile_csv(join(a.out_dir, "profile.csv"), pc);
  write_bestvol_csv(join(a.out_dir, "bestvol.csv"), hist);

  if (a.svg) {
    std::vector<double> t, s2;
    for (const auto& r : sig) {
      t.push_back(static_cast<double>(r.t));
      s2.push_back(r.sigma2);
    }
    svg_loglog(join(a.out_dir, "signature.svg"), t, s2, "signature plot sigma^2_t");
  }

  RunManifest man;
  man.subcommand = "simulate";
  man.outputs = {join(a.out_dir, "variogram.csv"), join(a.out_dir, "profile.csv"),
                 join(a.out_dir, "bestvol.csv")};
  finish_manifest(man, a, run, t0);
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const LoadedRun run = load_run(a, "sweep");
  fs::create_directories(a.out_dir);

  const std::string param = run.ini.get_string("sweep.param", "zeta");
  SweepParam sp;
  if (param == "zeta") sp = SweepParam::ZETA;
  else if (param == "psi") sp = SweepParam::PSI;
  else if (param == "alpha") sp = SweepParam::ALPHA;
  else throw ConfigError("key \"sweep.param\": expected zeta, psi or alpha, got " + param);
  const auto gammas = run.ini.get_list("sweep.gammas", {run.cfg.gamma});
  const auto values = run.ini.get_list("sweep.values");
  if (values.empty()) throw ConfigError("missing required key \"sweep.values\"");

  const auto points = sweep_experiment(run.cfg, run.mc, sp, gammas, values);
  std::vector<PhaseRow> rows;
  for (const auto& p : points) rows.push_back({p.gamma, p.value, p.s, p.stderr_s});
  write_phase_csv(join(a.out_dir, "phase.csv"), rows);
  if (a.svg) svg_phase_heatmap(join(a.out_dir, "phase.svg"), rows, "S over (gamma, " + param + ")");

  RunManifest man;
  man.subcommand = "sweep";
  man.outputs = {join(a.out_dir, "phase.csv")};
  finish_manifest(man, a, run, t0);
  return 0;
}

nlohmann::json impact_summary(const ImpactResult& res, const MeasureConfig& mc) {
  const auto table = impact_table(res.impact);
  const ImpactFit fit =
      impact_fit(table, mc.q_grid.front(), mc.q_grid.back());
  const DecayCurve dc = decay_curve(res.decay);
  nlohmann::json j;
  j["delta"] = fit.delta;
  j["delta_stderr"] = fit.stderr_delta;
  j["delta_r2"] = fit.r2;
  j["prefactor"] = fit.prefactor;
  j["theta"] = dc.theta;
  j["theta_stderr"] = dc.theta_stderr;
  j["impact_end_mean"] = dc.i_end;
  j["impact_plateau"] = dc.plateau;
  j["impact_plateau_stderr"] = dc.plateau_stderr;
  j["trajectories_completed"] = res.completed;
  j["trajectories_incomplete"] = res.incomplete;
  j["meta_trades"] = res.meta_trades;
  j["trades_during_meta"] = res.total_trades_during;
  return j;
}

int cmd_impact(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const LoadedRun run = load_run(a, "impact");
  const MetaOrderSpec meta = MetaOrderSpec::from_ini(run.ini);
  fs::create_directories(a.out_dir);

  const ImpactResult res = impact_experiment(run.cfg, meta, run.mc);
  const auto table = impact_table(res.impact);
  write_impact_csv(join(a.out_dir, "impact.csv"), table);
  write_decay_csv(join(a.out_dir, "decay.csv"), decay_curve(res.decay));
  write_markov_csv(join(a.out_dir, "markov.csv"), markov_check(res.markov));

  std::ofstream sm(join(a.out_dir, "summary.json"), std::ios::binary);
  sm << impact_summary(res, run.mc).dump(2) << '\n';
  sm.close();

  if (a.svg) {
    std::vector<double> q, i;
    for (const auto& r : table) {
      q.push_back(static_cast<double>(r.q));
      i.push_back(r.mean);
    }
    svg_loglog(join(a.out_dir, "impact.svg"), q, i, "impact I(Q)");
  }

  RunManifest man;
  man.subcommand = "impact";
  man.outputs = {join(a.out_dir, "impact.csv"), join(a.out_dir, "decay.csv"),
                 join(a.out_dir, "markov.csv"), join(a.out_dir, "summary.json")};
  finish_manifest(man, a, run, t0);
  return 0;
}

/// Background-only lag-frame statistics (phi = 0).
MarkovAcc markov_background(const ExperimentConfig& cfg, const MeasureConfig& mc) {
  std::shared_ptr<const TrendTable> table;
  if (cfg.sign_mode == SignMode::LMF) table = std::make_shared<TrendTable>(cfg.gamma);
  const int threads = resolve_threads(cfg.threads, cfg.replicas);
  auto results = run_replicas<MarkovAcc>(cfg.replicas, threads, [&](uint64_t r) {
    MarkovAcc acc(mc.markov_lags, 0.0);
    Engine eng(cfg, r, table);
    eng.warmup();
    struct PreRec {
      MarkovAcc* acc;
      double tick;
      void on_trade(const TradeRecord& tr, const OrderBook&) {
        if (tr.pre_bid != kNoQuote && tr.pre_ask != kNoQuote)
          acc->add_s0(0.5 * (static_cast<double>(tr.pre_ask) - static_cast<double>(tr.pre_bid)) * tick);
      }
    } pre{&acc, cfg.tick};
    eng.run_trades(64, pre);
    TradeTapeRecorder tape(static_cast<size_t>(mc.markov_lags) + 2);
    eng.run_trades(static_cast<uint64_t>(mc.markov_lags) + 2, tape);
    markov_add_path(acc, tape.tape, UINT64_MAX, cfg.tick);
    return acc;
  });
  MarkovAcc merged = std::move(results[0]);
  for (size_t r = 1; r < results.size(); ++r) merged.merge(results[r]);
  return merged;
}

int cmd_markov_check(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const LoadedRun run = load_run(a, "markov-check");
  fs::create_directories(a.out_dir);

  MarkovReport rep;
  if (run.ini.has("meta.phi")) {
    const MetaOrderSpec meta = MetaOrderSpec::from_ini(run.ini);
    const ImpactResult res = impact_experiment(run.cfg, meta, run.mc);
    rep = markov_check(res.markov);
  } else {
    rep = markov_check(markov_background(run.cfg, run.mc));
  }
  write_markov_csv(join(a.out_dir, "markov.csv"), rep);

  double worst_impact = 0, worst_ac = 0;
  for (const auto& r : rep.rows) {
    if (r.resid_impact_se > 0)
      worst_impact = std::max(worst_impact, std::fabs(r.resid_impact) / r.resid_impact_se);
    if (r.resid_ac_se > 0) worst_ac = std::max(worst_ac, std::fabs(r.resid_ac) / r.resid_ac_se);
  }
  nlohmann::json j;
  j["phi_tilde"] = rep.phi_tilde;
  j["s0"] = rep.s0;
  j["lags"] = rep.rows.size();
  j["max_abs_z_resid_impact"] = worst_impact;
  j["max_abs_z_resid_ac"] = worst_ac;
  std::ofstream sm(join(a.out_dir, "summary.json"), std::ios::binary);
  sm << j.dump(2) << '\n';
  sm.close();

  RunManifest man;
  man.subcommand = "markov-check";
  man.outputs = {join(a.out_dir, "markov.csv"), join(a.out_dir, "summary.json")};
  finish_manifest(man, a, run, t0);
  return 0;
}

int cmd_propagator(const CommonArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string text;
  if (!a.manifest_path.empty()) {
    const RunManifest m = RunManifest::load(a.manifest_path);
    if (m.subcommand != "propagator")
      throw ConfigError("manifest was produced by subcommand \"" + m.subcommand + "\"");
    text = m.config_text;
  } else if (!a.config_path.empty()) {
    text = read_file(a.config_path);
  } else {
    throw ConfigError("missing required option --config (or --from-manifest)");
  }
  const IniFile ini = IniFile::parse(text);
  fs::create_directories(a.out_dir);

  const double gamma = ini.get_double("propagator.gamma", 0.5);
  const double beta = ini.get_double("propagator.beta", (1.0 - gamma) / 2.0);
  const double phi_tilde = ini.get_double("propagator.phi_tilde", 0.1);
  const auto horizon = ini.get_int("propagator.horizon", 1000);
  const auto paths = static_cast<uint64_t>(ini.get_int("propagator.paths", 10000));
  const double g0 = ini.get_double("propagator.g0", 1.0);
  const double t0k = ini.get_double("propagator.t0", 1.0);
  const uint64_t seed = a.seed >= 0 ? static_cast<uint64_t>(a.seed)
                                    : static_cast<uint64_t>(ini.get_int("propagator.seed", 1));
  const std::string signs = ini.get_string("propagator.signs", "lmf");
  const std::string gmode = ini.get_string("propagator.g", "measured");

  PropagatorSpec spec = PropagatorSpec::parametric(beta, gamma, phi_tilde, horizon, g0, t0k);
  const SignMode mode = signs == "iid" ? SignMode::IID : SignMode::LMF;
  std::shared_ptr<const TrendTable> table;
  if (mode == SignMode::LMF) table = std::make_shared<TrendTable>(gamma);
  if (gmode == "measured") {
    spec.set_measured_background_corr(
        measure_sign_corr(mode, table, horizon, 4'000'000, seed ^ 0xA5A5A5A5ULL));
  } else if (gmode != "parametric") {
    throw ConfigError("key \"propagator.g\": expected measured or parametric, got " + gmode);
  }

  const auto lags = log_lag_grid(horizon, 8);
  const PropMcResult mcres = prop_monte_carlo(spec, lags, paths, mode, table, seed);

  CsvWriter w(join(a.out_dir, "propagator.csv"));
  w.raw("t,impact,impact_linear,impact_transient,variance_analytic,variance_mc,mc_stderr");
  for (size_t k = 0; k < lags.size(); ++k) {
    const PropImpact pi = prop_impact(spec, lags[k]);
    w.field(lags[k])
        .field(pi.total)
        .field(pi.linear)
        .field(pi.transient)
        .field(prop_variance(spec, lags[k]))
        .field(mcres.var[k])
        .field(mcres.var_se[k]);
    w.endrow();
  }

  RunManifest man;
  man.subcommand = "propagator";
  man.config_text = text;
  man.master_seed = seed;
  man.replicas = 1;
  man.threads = 1;
  man.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  man.outputs = {join(a.out_dir, "propagator.csv")};
  man.write(join(a.out_dir, "manifest.json"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) + " - latent order-book market simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args, sweep_args, imp_args, mkv_args, prop_args;
  auto* sim = app.add_subcommand("simulate", "background flow: diffusion, book shape, best volumes");
  add_common(sim, sim_args);
  auto* swp = app.add_subcommand("sweep", "phase statistic S over a parameter grid");
  add_common(swp, sweep_args);
  auto* imp = app.add_subcommand("impact", "meta-order execution: impact, decay, lag-frame stats");
  add_common(imp, imp_args);
  auto* mkv = app.add_subcommand("markov-check", "Markovian-book identity residuals");
  add_common(mkv, mkv_args);
  auto* prp = app.add_subcommand("propagator", "linear propagator oracle: analytic vs Monte Carlo");
  add_common(prp, prop_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (swp->parsed()) return cmd_sweep(sweep_args);
    if (imp->parsed()) return cmd_impact(imp_args);
    if (mkv->parsed()) return cmd_markov_check(mkv_args);
    if (prp->parsed()) return cmd_propagator(prop_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
