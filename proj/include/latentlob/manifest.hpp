#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latentlob/version.hpp"

namespace latentlob {

/// FNV-1a 64-bit digest of a byte string; used to fingerprint output files
/// in the run manifest (integrity bookkeeping, not cryptography).
inline uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Everything needed to re-execute a run and verify its outputs.
struct RunManifest {
  std::string subcommand;
  std::string config_text;
  uint64_t master_seed = 0;
  int replicas = 0;
  int threads = 0;
  std::vector<uint64_t> replica_seed_streams;  // stream indices fed to the rng
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;

  void write(const std::string& path) const {
    nlohmann::json j;
    j["tool"] = kVersion;
    j["subcommand"] = subcommand;
    j["config_text"] = config_text;
    j["master_seed"] = master_seed;
    j["replicas"] = replicas;
    j["threads"] = threads;
    j["replica_seed_streams"] = replica_seed_streams;
    j["wall_seconds"] = wall_seconds;
    auto files = nlohmann::json::array();
    for (const auto& f : outputs) {
      const std::string bytes = read_file(f);
      files.push_back({{"file", f}, {"fnv1a64", fnv1a64(bytes)}, {"bytes", bytes.size()}});
    }
    j["outputs"] = files;
    std::ofstream os(path, std::ios::binary);
    os << j.dump(2) << '\n';
  }

  static RunManifest load(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config_text = j.at("config_text").get<std::string>();
    m.master_seed = j.at("master_seed").get<uint64_t>();
    m.replicas = j.at("replicas").get<int>();
    m.threads = j.at("threads").get<int>();
    return m;
  }
};

}  // namespace latentlob
