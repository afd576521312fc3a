// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "tmpgnn/tasks.hpp"

using namespace tmpgnn;

TEST_CASE("splits are 80/10/10, disjoint, covering, deterministic") {
  SplitPlan p = make_split(50, SplitScheme::SingleSupragraph, 9);
  CHECK(p.test.size() == 5);
  CHECK(p.val.size() == 5);
  CHECK(p.train.size() == 40);

  std::set<uint32_t> all;
  for (auto* part : {&p.train, &p.val, &p.test})
    for (uint32_t v : *part) CHECK(all.insert(v).second);
  CHECK(all.size() == 50);
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == 49);

  SplitPlan q = make_split(50, SplitScheme::SingleSupragraph, 9);
  CHECK(q.train == p.train);
  CHECK(q.val == p.val);
  CHECK(q.test == p.test);

  SplitPlan r = make_split(50, SplitScheme::SingleSupragraph, 10);
  CHECK(r.test != p.test);

  CHECK_THROWS(make_split(5, SplitScheme::SingleSupragraph, 0));  // empty val/test
}

TEST_CASE("pair sampling balances classes and respects the part") {
  std::vector<uint32_t> part = {0, 1, 2, 5, 6};
  std::vector<int32_t> labels = {0, 0, 1, 9, 9, 1, 1};
  Rng rng(4);
  auto pairs = sample_pairs(part, labels, 40, rng);
  REQUIRE(pairs.size() == 40);
  size_t pos = 0;
  for (const auto& pr : pairs) {
    CHECK(pr.a != pr.b);
    CHECK(std::count(part.begin(), part.end(), pr.a) == 1);
    CHECK(std::count(part.begin(), part.end(), pr.b) == 1);
    bool same = labels[pr.a] == labels[pr.b];
    CHECK(pr.label == (same ? 1.0 : 0.0));
    pos += same;
  }
  CHECK(pos == 20);
}

TEST_CASE("pair sampling rejects degenerate parts") {
  Rng rng(1);
  std::vector<int32_t> labels = {0, 1, 2, 0};
  // all-distinct labels: no positive pair exists
  CHECK_THROWS_AS(sample_pairs({0, 1, 2}, labels, 4, rng), std::invalid_argument);
  // single label: no negative pair exists
  CHECK_THROWS_AS(sample_pairs({0, 3}, labels, 4, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_pairs({0}, labels, 4, rng), std::invalid_argument);
}

TEST_CASE("roc_auc handles clean separations and pure ties") {
  CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(roc_auc({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == doctest::Approx(0.0));
  CHECK(roc_auc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == doctest::Approx(0.5));
  CHECK(roc_auc({0.3, 0.3, 0.7}, {0, 1, 1}) == doctest::Approx(0.75));
  CHECK_THROWS(roc_auc({0.1, 0.2}, {1, 1}));
  CHECK_THROWS(roc_auc({0.1}, {1, 0}));
}

TEST_CASE("roc_auc equals pair counting on tie-heavy random instances") {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 2 + size_t(rng.uniform_int(40));
    std::vector<double> scores(n), labels(n);
    bool saw0 = false, saw1 = false;
    for (size_t i = 0; i < n; ++i) {
      // few distinct score levels forces plenty of ties
      scores[i] = double(rng.uniform_int(4)) / 4.0;
      labels[i] = double(rng.uniform_int(2));
      (labels[i] == 0 ? saw0 : saw1) = true;
    }
    if (!saw0) labels[0] = 0;
    if (!saw1) labels[n - 1] = 1;
    double fast = roc_auc(scores, labels);
    double slow = oracles::pair_count_auc(scores, labels);
    CHECK(fast == slow);  // exactly, not approximately
  }
}

TEST_CASE("relative improvement") {
  CHECK(relative_improvement(0.8, 0.5) == doctest::Approx(60.0));
  CHECK(relative_improvement(0.4, 0.5) == doctest::Approx(20.0));
  CHECK_THROWS(relative_improvement(0.4, 0.0));
}

namespace {

TemporalMultilayerGraph labelled_sbm(uint64_t seed) {
  SynthConfig cfg;
  // 40 nodes keeps the multigraph node split's 4-node val/test parts big
  // enough to hold both labels, so pair sampling stays feasible.
  cfg.num_nodes = 40;
  cfg.num_layers = 3;
  cfg.num_streams = 1;
  cfg.communities = 2;
  cfg.p_in = 0.5;
  cfg.p_out = 0.05;
  cfg.rewire = 0.05;
  cfg.seed = seed;
  return synth_graph(cfg);
}

ClassifyConfig small_classify() {
  ClassifyConfig cfg;
  cfg.pgnn.hidden = 8;
  cfg.pgnn.num_layers = 2;
  cfg.anchor_copies = 1;
  cfg.fixed_omega = 25.0;  // keep tests off the omega search
  cfg.epochs = 3;
  cfg.train_pairs = 60;
  cfg.val_pairs = 40;
  cfg.test_pairs = 40;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("embedding pipeline dimensions and determinism") {
  auto g = labelled_sbm(2);
  ClassifyConfig cfg = small_classify();

  EmbedResult a = compute_embeddings(g, cfg);
  EmbedResult b = compute_embeddings(g, cfg);
  CHECK(a.dim == anchor_scale_count(g.node_layer_count()) * cfg.anchor_copies);
  CHECK(a.z.size() == g.node_layer_count() * a.dim);
  CHECK(a.z == b.z);  // bit-identical rebuild
  CHECK(a.omega == doctest::Approx(25.0));
  for (double v : a.z) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  cfg.seed = 6;
  EmbedResult c = compute_embeddings(g, cfg);
  CHECK(a.z != c.z);
}

TEST_CASE("multigraph embeddings stack per-layer rows and skip the supra matrix") {
  auto g = labelled_sbm(3);
  ClassifyConfig cfg = small_classify();
  cfg.scheme = SplitScheme::MultigraphNodeSplit;

  EmbedResult r = compute_embeddings(g, cfg);
  CHECK(r.dim == anchor_scale_count(g.num_nodes) * cfg.anchor_copies);
  CHECK(r.z.size() == g.node_layer_count() * r.dim);
  CHECK(r.omega == 0.0);
}

TEST_CASE("pipeline forward matches compute_embeddings") {
  auto g = labelled_sbm(4);
  ClassifyConfig cfg = small_classify();
  EmbedPipeline pipe = build_embed_pipeline(g, cfg);
  Tensor Z = embed_forward(pipe);
  EmbedResult r = compute_embeddings(g, cfg);
  CHECK(Z.rows() == g.node_layer_count());
  CHECK(Z.cols() == r.dim);
  CHECK(Z.value() == r.z);
}

TEST_CASE("pairwise training runs, checkpoints on validation, reports sane numbers") {
  auto g = labelled_sbm(5);
  for (SplitScheme scheme :
       {SplitScheme::SingleSupragraph, SplitScheme::MultigraphNodeSplit}) {
    CAPTURE(int(scheme));
    ClassifyConfig cfg = small_classify();
    cfg.scheme = scheme;
    ClassifyReport rep = train_pairwise(g, cfg);
    CHECK(rep.epochs_run == cfg.epochs);
    CHECK(rep.best_epoch < cfg.epochs);
    CHECK(rep.test_auc >= 0.0);
    CHECK(rep.test_auc <= 1.0);
    CHECK(rep.best_val_auc >= 0.0);
    CHECK(rep.best_val_auc <= 1.0);
    CHECK(rep.embed_dim > 0);
    CHECK(std::isfinite(rep.final_train_loss));
    if (scheme == SplitScheme::SingleSupragraph)
      CHECK(rep.omega == doctest::Approx(25.0));
    else
      CHECK(rep.omega == 0.0);

    // same seed, same report
    ClassifyReport rep2 = train_pairwise(g, cfg);
    CHECK(rep2.test_auc == rep.test_auc);
    CHECK(rep2.best_val_auc == rep.best_val_auc);
    CHECK(rep2.final_train_loss == rep.final_train_loss);
  }
}

TEST_CASE("anchor resampling path stays deterministic") {
  auto g = labelled_sbm(6);
  ClassifyConfig cfg = small_classify();
  cfg.resample_anchors = true;
  cfg.epochs = 2;
  ClassifyReport a = train_pairwise(g, cfg);
  ClassifyReport b = train_pairwise(g, cfg);
  CHECK(a.test_auc == b.test_auc);
  CHECK(a.final_train_loss == b.final_train_loss);
}

TEST_CASE("training requires labels") {
  auto g = labelled_sbm(7);
  g.node_labels.clear();
  CHECK_THROWS(train_pairwise(g, small_classify()));
}
