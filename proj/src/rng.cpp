// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/rng.hpp"

namespace tmpgnn {

uint64_t substream_seed(uint64_t master, std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  // one splitmix step to decorrelate nearby masters
  uint64_t z = master ^ h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tmpgnn
