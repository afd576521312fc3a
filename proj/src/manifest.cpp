// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tmpgnn {

namespace {

std::string hex64(uint64_t h) {
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

uint64_t fnv1a(uint64_t h, const char* data, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    h ^= uint64_t(uint8_t(data[i]));
    h *= 0x100000001b3ull;
  }
  return h;
}

constexpr uint64_t kFnvBasis = 0xcbf29ce484222325ull;

}  // namespace

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_digest: cannot open " + path);
  uint64_t h = kFnvBasis;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h = fnv1a(h, buf, size_t(in.gcount()));
  return hex64(h);
}

std::string string_digest(const std::string& text) {
  return hex64(fnv1a(kFnvBasis, text.data(), text.size()));
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  j["config"] = m.config;
  j["config_digest"] = string_digest(m.config.dump());
  j["seeds"] = {{"master", m.master_seed}};
  nlohmann::ordered_json ins = nlohmann::ordered_json::object();
  for (const auto& [p, digest] : m.inputs) ins[p] = digest;
  j["inputs"] = ins;
  j["outputs"] = m.outputs;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << j.dump(2) << "\n";
}

nlohmann::ordered_json load_config_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config: " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config: " + path + " must hold a JSON object");
  if (j.contains("config") && j.contains("subcommand")) return j["config"];
  return j;
}

}  // namespace tmpgnn
