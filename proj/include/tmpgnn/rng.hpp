// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace tmpgnn {

// Seedable, fully portable generator (splitmix64 core). std:: distributions
// are avoided on purpose: their output is implementation-defined and run
// reproducibility here must be bit-exact across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [0, n), n > 0
  uint64_t uniform_int(uint64_t n) {
    return static_cast<uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over the substream name, mixed with the master seed. One master
// seed fans out to independent streams for anchors, masks, splits, init.
uint64_t substream_seed(uint64_t master, std::string_view name);

inline Rng substream(uint64_t master, std::string_view name) {
  return Rng(substream_seed(master, name));
}

}  // namespace tmpgnn
