#pragma once

#include <map>

#include "nvs/serialization.hpp"

namespace nvs {

std::string sha256_hex(const std::vector<uint8_t>& bytes);
std::string sha256_file(const std::string& path);

// Reproducibility record of one CLI run: the full parameter snapshot, input
// hashes, and a hash per artifact. Replaying a manifest re-runs the command
// and must reproduce every artifact hash (timings are informational only).
struct RunManifest {
  std::string tool_version;
  std::string command;
  uint64_t seed = 0;
  Json params;
  std::map<std::string, Json> inputs;            // name -> {path, sha256}
  std::map<std::string, std::string> artifacts;  // out_dir-relative path -> sha256
  std::map<std::string, double> timings_ms;

  void add_input(const std::string& name, const std::string& path);

  Json to_json() const;
  static RunManifest from_json(const Json& j);
  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

}  // namespace nvs
