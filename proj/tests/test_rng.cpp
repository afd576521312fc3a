// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "tmpgnn/rng.hpp"

using namespace tmpgnn;

TEST_CASE("same seed same stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("substreams are independent and reproducible") {
  uint64_t master = 7;
  CHECK(substream_seed(master, "anchors") == substream_seed(master, "anchors"));
  CHECK(substream_seed(master, "anchors") != substream_seed(master, "masks"));
  CHECK(substream_seed(master, "anchors") != substream_seed(8, "anchors"));

  Rng a = substream(master, "x");
  Rng b = substream(master, "x");
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform01 bounds") {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_int covers its range") {
  Rng rng(10);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    uint64_t v = rng.uniform_int(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("bernoulli frequency within 3 sigma") {
  Rng rng(11);
  const int n = 100000;
  const double p = 0.3;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(p)) ++hits;
  double sigma = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(hits - n * p) < 3 * sigma);
}

TEST_CASE("normal moments within 3 sigma") {
  Rng rng(12);
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("uniform range respects endpoints") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}
