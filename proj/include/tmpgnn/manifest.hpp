// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace tmpgnn {

inline constexpr const char* kToolName = "tmpgnn";
inline constexpr const char* kToolVersion = "0.1.0";

// One manifest per run: the resolved config block is itself a valid
// --config payload, so feeding the manifest back reproduces the outputs.
// Timing lives outside the config block and never touches the outputs.
struct RunManifest {
  std::string subcommand;
  nlohmann::ordered_json config;
  uint64_t master_seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
};

// FNV-1a 64-bit over the raw file bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

// Same digest over an in-memory string (used for the config block).
std::string string_digest(const std::string& text);

void write_manifest(const RunManifest& m, const std::string& path);

// Accepts either a plain config object or a whole manifest (in which case
// the embedded config block is returned).
nlohmann::ordered_json load_config_source(const std::string& path);

}  // namespace tmpgnn
