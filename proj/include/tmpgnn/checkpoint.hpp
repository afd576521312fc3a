// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tmpgnn/nn.hpp"

namespace tmpgnn {

struct CheckpointEntry {
  std::string name;
  std::vector<uint64_t> dims;
  std::vector<double> data;
};

// Flat binary format, little-endian throughout:
//   magic "TMPG", u32 version (=1), u64 tensor count,
//   then per tensor: u32 name length, name bytes, u32 ndim, u64 dims...,
//   f64 payload in row-major order.
void save_checkpoint(const ParamStore& store, const std::string& path);

// Strict by-name load into an already-built store; every stored tensor must
// match an existing parameter's shape, and vice versa.
void load_checkpoint(ParamStore& store, const std::string& path);

std::vector<CheckpointEntry> read_checkpoint(const std::string& path);

}  // namespace tmpgnn
