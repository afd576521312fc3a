// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tmpgnn/anchors.hpp"
#include "tmpgnn/graph.hpp"

using namespace tmpgnn;

namespace {

CsrMatrix ring(uint32_t n) {
  std::vector<Triplet> t;
  for (uint32_t i = 0; i < n; ++i) {
    t.push_back({i, (i + 1) % n, 1.0});
    t.push_back({(i + 1) % n, i, 1.0});
  }
  return CsrMatrix::from_triplets(n, n, t);
}

CsrMatrix random_undirected(uint32_t n, uint32_t edges, Rng& rng) {
  std::vector<Triplet> t;
  for (uint32_t k = 0; k < edges; ++k) {
    uint32_t a = uint32_t(rng.uniform_int(n)), b = uint32_t(rng.uniform_int(n));
    if (a == b) continue;
    t.push_back({a, b, 1.0});
    t.push_back({b, a, 1.0});
  }
  return CsrMatrix::from_triplets(n, n, t);
}

}  // namespace

TEST_CASE("scale count is ceil(log2 n)") {
  CHECK(anchor_scale_count(2) == 1);
  CHECK(anchor_scale_count(3) == 2);
  CHECK(anchor_scale_count(4) == 2);
  CHECK(anchor_scale_count(8) == 3);
  CHECK(anchor_scale_count(9) == 4);
  CHECK(anchor_scale_count(1024) == 10);
}

TEST_CASE("anchor families are deterministic, nonempty and sorted") {
  auto a = sample_anchor_sets(40, 3, 99);
  auto b = sample_anchor_sets(40, 3, 99);
  CHECK(a.count() == size_t(3) * anchor_scale_count(40));
  REQUIRE(a.sets.size() == b.sets.size());
  for (size_t j = 0; j < a.sets.size(); ++j) {
    CHECK(a.sets[j] == b.sets[j]);
    REQUIRE(!a.sets[j].empty());
    for (size_t i = 1; i < a.sets[j].size(); ++i) CHECK(a.sets[j][i - 1] < a.sets[j][i]);
    for (uint32_t v : a.sets[j]) CHECK(v < 40);
  }
  auto c = sample_anchor_sets(40, 3, 100);
  bool differs = false;
  for (size_t j = 0; j < a.sets.size() && !differs; ++j) differs = a.sets[j] != c.sets[j];
  CHECK(differs);
}

TEST_CASE("inclusion probability halves per scale") {
  // Scale i keeps each node with probability 2^-i, resampling empty draws.
  // Conditioned on being non-empty the mean set size is np / (1-(1-p)^n),
  // which matters at the sparsest scales (+0.57 nodes at p=1/64, n=64).
  const size_t n = 64;
  const uint32_t copies = 1, k = anchor_scale_count(n);  // 6 scales
  const int reps = 4000;
  std::vector<double> mean(k, 0.0);
  for (int r = 0; r < reps; ++r) {
    auto fam = sample_anchor_sets(n, copies, 1000 + r);
    for (uint32_t i = 0; i < k; ++i) mean[i] += double(fam.sets[i].size());
  }
  for (uint32_t i = 0; i < k; ++i) {
    mean[i] /= reps;
    double p = std::ldexp(1.0, -int(i + 1));
    double want = n * p / (1.0 - std::pow(1.0 - p, double(n)));
    double sigma = std::sqrt(n * p * (1 - p) / reps);
    CHECK(std::abs(mean[i] - want) < 4 * sigma + 0.05);
  }
}

TEST_CASE("json round trip") {
  auto fam = sample_anchor_sets(30, 2, 5);
  auto back = anchors_from_json(anchors_to_json(fam));
  CHECK(back.universe == fam.universe);
  CHECK(back.scales == fam.scales);
  CHECK(back.copies == fam.copies);
  CHECK(back.seed == fam.seed);
  CHECK(back.sets == fam.sets);
}

TEST_CASE("truncated distances match Floyd-Warshall, serial and parallel") {
  Rng rng(44);
  for (int trial = 0; trial < 6; ++trial) {
    uint32_t n = 10 + uint32_t(rng.uniform_int(40));
    CsrMatrix adj = random_undirected(n, 2 * n, rng);
    for (uint32_t q : {1u, 2u, 3u}) {
      auto ser = truncated_distances_serial(adj, q);
      auto par = truncated_distances_parallel(adj, q);
      CHECK(ser.offsets == par.offsets);
      CHECK(ser.node == par.node);
      CHECK(ser.hops == par.hops);
      auto want = oracles::apsp_clipped(adj, int(q));
      for (uint32_t u = 0; u < n; ++u)
        for (uint32_t v = 0; v < n; ++v) CHECK(ser.distance(u, v) == want[size_t(u) * n + v]);
    }
  }
}

TEST_CASE("ball sizes on a ring") {
  auto d = truncated_distances(ring(10), 2);
  for (uint32_t u = 0; u < 10; ++u) {
    CHECK(d.ball_size(u) == 5);  // self + 2 each side
    CHECK(d.distance(u, u) == 0);
    CHECK(d.distance(u, (u + 1) % 10) == 1);
    CHECK(d.distance(u, (u + 2) % 10) == 2);
    CHECK(d.distance(u, (u + 3) % 10) == -1);
  }
}

TEST_CASE("nearest anchor member breaks ties toward the lowest index") {
  // ring of 6: from node 0, nodes 1 and 5 are both one hop away
  auto d = truncated_distances(ring(6), 2);
  auto hit = nearest_in_anchor(0, {1, 5}, d);
  REQUIRE(hit.has_value());
  CHECK(hit->node == 1);
  CHECK(hit->dist == 1);

  auto self_hit = nearest_in_anchor(0, {0, 1}, d);
  REQUIRE(self_hit.has_value());
  CHECK(self_hit->node == 0);
  CHECK(self_hit->dist == 0);

  CHECK(!nearest_in_anchor(0, {3}, d, 2).has_value());  // 3 hops away on the ring
}

TEST_CASE("supra skeleton wires chain copies for every node") {
  TemporalMultilayerGraph g;
  g.num_nodes = 3;
  g.num_layers = 3;
  g.num_streams = 1;
  g.edges = {{0, 0, 1, {1.0}}};  // single intra edge at layer 0
  CsrMatrix skel = supra_skeleton(g, 1, true);
  REQUIRE(skel.rows == 9);
  auto d = truncated_distances(skel, 2);
  CHECK(d.distance(0, 1) == 1);  // intra edge, symmetric
  CHECK(d.distance(1, 0) == 1);
  CHECK(d.distance(0, 3) == 1);  // node 0: layer 0 -> layer 1 copy
  CHECK(d.distance(3, 6) == 1);
  CHECK(d.distance(0, 6) == 2);
  CHECK(d.distance(2, 5) == 1);  // isolated node still gets its chain
  // no interlayer edges when disabled
  CsrMatrix intra = supra_skeleton(g, 1, false);
  auto d2 = truncated_distances(intra, 2);
  CHECK(d2.distance(0, 3) == -1);

  // delta = 2 connects layers 0 and 2 directly
  CsrMatrix wide = supra_skeleton(g, 2, true);
  auto d3 = truncated_distances(wide, 2);
  CHECK(d3.distance(0, 6) == 1);
  CHECK(d3.distance(0, 3) == -1);
}

TEST_CASE("layer skeleton is symmetric and layer-local") {
  TemporalMultilayerGraph g;
  g.num_nodes = 3;
  g.num_layers = 2;
  g.num_streams = 1;
  g.edges = {{0, 0, 1, {1.0}}, {1, 1, 2, {1.0}}};
  auto s0 = layer_skeleton(g, 0);
  CHECK(s0.at(0, 1) == 1.0);
  CHECK(s0.at(1, 0) == 1.0);
  CHECK(s0.at(1, 2) == 0.0);
  auto s1 = layer_skeleton(g, 1);
  CHECK(s1.at(1, 2) == 1.0);
  CHECK(s1.at(0, 1) == 0.0);
}
