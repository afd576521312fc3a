// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tmpgnn/distances.hpp"
#include "tmpgnn/pgnn.hpp"

using namespace tmpgnn;

namespace {

// Path 0-1-2-3-4, optionally with extra isolated trailing nodes.
CsrMatrix path5(size_t extra = 0) {
  std::vector<Triplet> tr;
  for (uint32_t i = 0; i + 1 < 5; ++i) {
    tr.push_back({i, i + 1, 1.0});
    tr.push_back({i + 1, i, 1.0});
  }
  return CsrMatrix::from_triplets(5 + extra, 5 + extra, tr);
}

AnchorSetFamily fixed_anchors(size_t universe) {
  AnchorSetFamily fam;
  fam.universe = universe;
  fam.scales = 3;
  fam.copies = 1;
  fam.sets = {{0}, {3, 4}, {0, 4}};
  return fam;
}

const std::vector<double> kCc = {0.1, 0.2, 0.3, 0.25, 0.15};

size_t find_seg(const PgnnPlan& p, uint32_t v, uint32_t j) {
  for (size_t s = 0; s < p.segment_count(); ++s)
    if (p.seg_vertex[s] == v && p.seg_set[s] == j) return s;
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("fast-mode plan picks nearest members and centrality weights") {
  auto dmap = truncated_distances(path5(), 2);
  PgnnConfig cfg;  // fast, q=2
  PgnnPlan plan = build_pgnn_plan(fixed_anchors(5), dmap, kCc, cfg);

  CHECK(plan.num_sets == 3);
  // v0 reaches sets 0 and 2; v1 and v2 all three; v3 and v4 sets 1 and 2.
  CHECK(plan.segment_count() == 12);
  CHECK(plan.pair_member.size() == 12);  // one nearest member per segment

  // v1: nearest of {0} is 0 at d=1; of {3,4} is 3 at d=2; of {0,4} is 0 at d=1.
  size_t s10 = find_seg(plan, 1, 0), s11 = find_seg(plan, 1, 1), s12 = find_seg(plan, 1, 2);
  CHECK(plan.pair_member[plan.seg_offsets[s10]] == 0);
  CHECK(plan.pair_member[plan.seg_offsets[s11]] == 3);
  CHECK(plan.pair_member[plan.seg_offsets[s12]] == 0);
  CHECK(plan.seg_damp[s10] == doctest::Approx(1.0 / 2));
  CHECK(plan.seg_damp[s11] == doctest::Approx(1.0 / 3));
  // r weights: 1-2 hop centrality mass {0.1, 0.25, 0.1} over 0.45, then / J.
  CHECK(plan.seg_weight[s10] == doctest::Approx(0.1 / 0.45 / 3));
  CHECK(plan.seg_weight[s11] == doctest::Approx(0.25 / 0.45 / 3));
  CHECK(plan.seg_weight[s12] == doctest::Approx(0.1 / 0.45 / 3));

  // v2 vs {0,4}: both at d=2, tie breaks to node 0.
  size_t s22 = find_seg(plan, 2, 2);
  CHECK(plan.pair_member[plan.seg_offsets[s22]] == 0);
  CHECK(plan.seg_damp[s22] == doctest::Approx(1.0 / 3));

  // v0 sees no member at hop 1-2 anywhere: uniform fallback across its 2 sets.
  size_t s00 = find_seg(plan, 0, 0), s02 = find_seg(plan, 0, 2);
  CHECK(plan.seg_weight[s00] == doctest::Approx(0.5 / 3));
  CHECK(plan.seg_weight[s02] == doctest::Approx(0.5 / 3));
  CHECK(plan.seg_damp[s00] == doctest::Approx(1.0));  // self at d=0

  // v4 vs {0,4}: only the d=0 self qualifies for rows but adds no 1-2 hop
  // mass, so all weight concentrates on set 1.
  CHECK(plan.seg_weight[find_seg(plan, 4, 1)] == doctest::Approx(1.0 / 3));
  CHECK(plan.seg_weight[find_seg(plan, 4, 2)] == doctest::Approx(0.0));
}

TEST_CASE("full-mode plan keeps every member within q and averages over the set") {
  auto dmap = truncated_distances(path5(), 2);
  PgnnConfig cfg;
  cfg.full_mode = true;
  PgnnPlan plan = build_pgnn_plan(fixed_anchors(5), dmap, kCc, cfg);

  // v2 vs {3,4}: members at d=1 and d=2, damp (1/2 + 1/3) / 2.
  size_t s21 = find_seg(plan, 2, 1);
  CHECK(plan.seg_offsets[s21 + 1] - plan.seg_offsets[s21] == 2);
  CHECK(plan.seg_damp[s21] == doctest::Approx((0.5 + 1.0 / 3) / 2));

  // v0 vs {0,4}: node 4 is out of range, zero message still divides the mean.
  size_t s02 = find_seg(plan, 0, 2);
  CHECK(plan.seg_offsets[s02 + 1] - plan.seg_offsets[s02] == 1);
  CHECK(plan.seg_damp[s02] == doctest::Approx(0.5));

  // v4 vs {3,4}: d=1 and d=0 members both present.
  size_t s41 = find_seg(plan, 4, 1);
  CHECK(plan.seg_offsets[s41 + 1] - plan.seg_offsets[s41] == 2);
  CHECK(plan.seg_damp[s41] == doctest::Approx((0.5 + 1.0) / 2));
}

TEST_CASE("max centrality weighting is available") {
  auto dmap = truncated_distances(path5(), 2);
  PgnnConfig cfg;
  cfg.cc_weight_max = true;
  PgnnPlan plan = build_pgnn_plan(fixed_anchors(5), dmap, kCc, cfg);
  // v2 masses become {0.1, max(0.25,0.15), max(0.1,0.15)} = {0.1,0.25,0.15}.
  CHECK(plan.seg_weight[find_seg(plan, 2, 0)] == doctest::Approx(0.1 / 0.5 / 3));
  CHECK(plan.seg_weight[find_seg(plan, 2, 1)] == doctest::Approx(0.25 / 0.5 / 3));
  CHECK(plan.seg_weight[find_seg(plan, 2, 2)] == doctest::Approx(0.15 / 0.5 / 3));
}

TEST_CASE("plan validation") {
  auto dmap = truncated_distances(path5(), 2);
  PgnnConfig cfg;
  CHECK_THROWS(build_pgnn_plan(fixed_anchors(4), dmap, kCc, cfg));
  CHECK_THROWS(build_pgnn_plan(fixed_anchors(5), dmap, {0.1, 0.2}, cfg));
  auto shallow = truncated_distances(path5(), 1);
  CHECK_THROWS(build_pgnn_plan(fixed_anchors(5), shallow, kCc, cfg));
  PgnnConfig full;
  full.full_mode = true;
  full.q = 3;
  CHECK_THROWS(build_pgnn_plan(fixed_anchors(5), dmap, kCc, full));
}

TEST_CASE("vertices out of every anchor's reach embed at sigmoid(0)") {
  auto dmap = truncated_distances(path5(1), 2);  // node 5 isolated
  std::vector<double> cc = kCc;
  cc.push_back(0.05);
  PgnnConfig cfg;
  PgnnPlan plan = build_pgnn_plan(fixed_anchors(6), dmap, cc, cfg);

  ParamStore store;
  Rng rng(3);
  PgnnParams params = make_pgnn(store, "pgnn", 2, cfg, rng);
  Tensor X = Tensor::from(6, 2, {1, 0, 0, 1, 1, 1, 0, 0, 0.5, 0.5, 1, 0.2});
  Tensor Z = pgnn_embed(plan, params, X);
  REQUIRE(Z.rows() == 6);
  REQUIRE(Z.cols() == 3);
  for (size_t j = 0; j < 3; ++j) CHECK(Z.value()[5 * 3 + j] == 0.5);
  // set 1 never reaches v0 either
  CHECK(Z.value()[0 * 3 + 1] == 0.5);
  // while a reached cell moves off the midpoint
  CHECK(Z.value()[1 * 3 + 0] != 0.5);
}

TEST_CASE("embedding gradients match finite differences in both modes") {
  for (bool full : {false, true}) {
    for (uint32_t layers : {1u, 2u}) {
      CAPTURE(full);
      CAPTURE(layers);
      auto dmap = truncated_distances(path5(), 2);
      PgnnConfig cfg;
      cfg.full_mode = full;
      cfg.num_layers = layers;
      cfg.hidden = 4;
      PgnnPlan plan = build_pgnn_plan(fixed_anchors(5), dmap, kCc, cfg);

      ParamStore store;
      Rng rng(17 + layers);
      Tensor X = store.create("X", 5, 3, rng);
      PgnnParams params = make_pgnn(store, "pgnn", 3, cfg, rng);
      auto loss = [&] {
        Tensor Z = pgnn_embed(plan, params, X);
        return sum_all(mul(Z, Z));
      };
      CHECK(oracles::fd_worst_rel_err(store, loss) < 1e-6);
    }
  }
}

TEST_CASE("edge embedding is the endpoint mean") {
  Tensor Z = Tensor::from(3, 2, {1, 2, 3, 4, 5, 6});
  Tensor E = edge_embedding(Z, {0, 1}, {2, 1});
  CHECK(E.value() == std::vector<double>{3, 4, 3, 4});
  CHECK_THROWS(edge_embedding(Z, {0}, {1, 2}));
}

TEST_CASE("node features are incident stream means plus the centrality column") {
  TemporalMultilayerGraph g;
  g.num_nodes = 3;
  g.num_layers = 2;
  g.num_streams = 2;
  g.edges = {{0, 0, 1, {1, 2}}, {0, 1, 2, {3, 4}}, {1, 0, 2, {5, 6}}};
  std::vector<double> cc = {0.5, 0.3, 0.2};

  Tensor F = supra_node_features(g, cc);
  REQUIRE(F.rows() == 6);
  REQUIRE(F.cols() == 3);
  std::vector<double> expect = {
      1, 2, 0.5, 2, 3, 0.3, 3, 4, 0.2,  // layer 0; node 1 averages two edges
      5, 6, 0.5, 0, 0, 0.3, 5, 6, 0.2,  // layer 1; node 1 untouched
  };
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(F.value()[i] == doctest::Approx(expect[i]));

  Tensor L = layer_node_features(g, 1, cc);
  REQUIRE(L.rows() == 3);
  for (size_t i = 0; i < 9; ++i) CHECK(L.value()[i] == doctest::Approx(expect[9 + i]));
}

TEST_CASE("streamless graphs get a constant feature column") {
  TemporalMultilayerGraph g;
  g.num_nodes = 2;
  g.num_layers = 1;
  g.num_streams = 0;
  g.edges = {{0, 0, 1, {}}};
  Tensor F = supra_node_features(g, {0.7, 0.3});
  REQUIRE(F.cols() == 2);
  CHECK(F.value() == std::vector<double>{1.0, 0.7, 1.0, 0.3});
}

TEST_CASE("a self-loop contributes to its node once") {
  TemporalMultilayerGraph g;
  g.num_nodes = 1;
  g.num_layers = 1;
  g.num_streams = 1;
  g.edges = {{0, 0, 0, {10}}};
  Tensor F = supra_node_features(g, {1.0});
  CHECK(F.value()[0] == doctest::Approx(10.0));
}

TEST_CASE("expand_cc_to_vertices tiles per layer") {
  CHECK(expand_cc_to_vertices({0.5, 0.3}, 3) ==
        std::vector<double>{0.5, 0.3, 0.5, 0.3, 0.5, 0.3});
}
