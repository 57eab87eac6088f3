#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "latentlob/measure.hpp"

namespace latentlob {

/// Locale-independent CSV writer. Floats are printed with %.12g so a given
/// double always renders to the same bytes.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : os_(path, std::ios::binary) {
    if (!os_) throw std::runtime_error("cannot open for writing: " + path);
  }

  void raw(const std::string& line) { os_ << line << '\n'; }

  CsvWriter& field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    sep();
    os_ << buf;
    return *this;
  }

  CsvWriter& field(int64_t v) {
    sep();
    os_ << v;
    return *this;
  }

  CsvWriter& field(uint64_t v) {
    sep();
    os_ << v;
    return *this;
  }

  CsvWriter& field(const std::string& v) {
    sep();
    os_ << v;
    return *this;
  }

  void endrow() {
    os_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }

  std::ofstream os_;
  bool first_ = true;
};

inline void write_variogram_csv(const std::string& path, const std::vector<SignatureRow>& rows) {
  CsvWriter w(path);
  w.raw("t,D,sigma2,stderr,n");
  for (const auto& r : rows) {
    w.field(r.t).field(r.d).field(r.sigma2).field(r.stderr_d).field(r.n);
    w.endrow();
  }
}

inline void write_impact_csv(const std::string& path, const std::vector<ImpactRow>& rows) {
  CsvWriter w(path);
  w.raw("Q,I_mean,I_stderr,n");
  for (const auto& r : rows) {
    w.field(r.q).field(r.mean).field(r.stderr_mean).field(r.n);
    w.endrow();
  }
}

inline void write_profile_csv(const std::string& path, const ProfileCompare& pc) {
  CsvWriter w(path);
  w.raw("offset_ticks,side,mean_volume,mf_volume");
  for (const auto& r : pc.rows) {
    w.field(r.offset).field(std::string(r.offset < 0 ? "BID" : "ASK")).field(r.mean).field(r.mean_field);
    w.endrow();
  }
}

inline void write_bestvol_csv(const std::string& path, const std::vector<BestVolumeRow>& rows) {
  CsvWriter w(path);
  w.raw("volume_bin_lo,volume_bin_hi,count");
  for (const auto& r : rows) {
    w.field(r.bin_lo).field(r.bin_hi).field(r.count);
    w.endrow();
  }
}

inline void write_decay_csv(const std::string& path, const DecayCurve& dc) {
  CsvWriter w(path);
  w.raw("t,I,stderr,n");
  for (const auto& r : dc.rows) {
    w.field(r.t).field(r.i).field(r.stderr_i).field(r.n);
    w.endrow();
  }
}

inline void write_markov_csv(const std::string& path, const MarkovReport& rep) {
  CsvWriter w(path);
  w.raw(
      "t,pi_uncond,pi_plus,pi_minus,s_uncond,dl_mean,resid_impact,resid_ac,"
      "pi_stderr,s_stderr,dl_stderr,resid_impact_stderr,resid_ac_stderr");
  for (const auto& r : rep.rows) {
    w.field(r.t)
        .field(r.pi)
        .field(r.pi_plus)
        .field(r.pi_minus)
        .field(r.s)
        .field(r.dl)
        .field(r.resid_impact)
        .field(r.resid_ac)
        .field(r.pi_se)
        .field(r.s_se)
        .field(r.dl_se)
        .field(r.resid_impact_se)
        .field(r.resid_ac_se);
    w.endrow();
  }
}

struct PhaseRow {
  double param1 = 0.0;  // gamma
  double param2 = 0.0;  // swept parameter
  double s = 0.0;
  double stderr_s = 0.0;
};

inline void write_phase_csv(const std::string& path, const std::vector<PhaseRow>& rows) {
  CsvWriter w(path);
  w.raw("param1,param2,S,stderr");
  for (const auto& r : rows) {
    w.field(r.param1).field(r.param2).field(r.s).field(r.stderr_s);
    w.endrow();
  }
}

}  // namespace latentlob
