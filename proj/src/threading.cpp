// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/threading.hpp"

#include <omp.h>

#include <cstdlib>

namespace tmpgnn {

static int read_cap() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("SUPRA_EMBED_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n < 1 ? 1 : n;
}

int max_threads() {
  static int cached = read_cap();
  return cached;
}

}  // namespace tmpgnn
