// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tmpgnn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'T', 'M', 'P', 'G'};
constexpr uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const ParamStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, uint64_t(store.tensors.size()));
  for (size_t i = 0; i < store.tensors.size(); ++i) {
    const auto& name = store.names[i];
    const Tensor& t = store.tensors[i];
    put(out, uint32_t(name.size()));
    out.write(name.data(), std::streamsize(name.size()));
    put(out, uint32_t(2));
    put(out, uint64_t(t.rows()));
    put(out, uint64_t(t.cols()));
    out.write(reinterpret_cast<const char*>(t.value().data()),
              std::streamsize(t.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

std::vector<CheckpointEntry> read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  uint32_t version = get<uint32_t>(in);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  uint64_t count = get<uint64_t>(in);
  std::vector<CheckpointEntry> entries;
  entries.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    CheckpointEntry e;
    uint32_t len = get<uint32_t>(in);
    e.name.resize(len);
    in.read(e.name.data(), len);
    uint32_t ndim = get<uint32_t>(in);
    e.dims.resize(ndim);
    uint64_t total = 1;
    for (uint32_t d = 0; d < ndim; ++d) total *= (e.dims[d] = get<uint64_t>(in));
    e.data.resize(total);
    in.read(reinterpret_cast<char*>(e.data.data()), std::streamsize(total * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    entries.push_back(std::move(e));
  }
  return entries;
}

void load_checkpoint(ParamStore& store, const std::string& path) {
  auto entries = read_checkpoint(path);
  if (entries.size() != store.tensors.size())
    throw std::runtime_error("checkpoint: tensor count mismatch");
  for (const auto& e : entries) {
    Tensor* t = store.find(e.name);
    if (!t) throw std::runtime_error("checkpoint: unknown tensor " + e.name);
    if (e.dims.size() != 2 || e.dims[0] != t->rows() || e.dims[1] != t->cols())
      throw std::runtime_error("checkpoint: shape mismatch for " + e.name);
    t->value() = e.data;
  }
}

}  // namespace tmpgnn
