// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tmpgnn {

SplitPlan make_split(size_t universe, SplitScheme scheme, uint64_t seed) {
  size_t n_test = universe / 10, n_val = universe / 10;
  size_t n_train = universe - n_test - n_val;
  if (n_test == 0 || n_val == 0 || n_train == 0)
    throw std::invalid_argument("make_split: universe too small for nonempty 80/10/10 parts");
  std::vector<uint32_t> ids(universe);
  std::iota(ids.begin(), ids.end(), 0u);
  Rng rng = substream(seed, "splits");
  for (size_t i = universe - 1; i > 0; --i)
    std::swap(ids[i], ids[rng.uniform_int(i + 1)]);
  SplitPlan plan;
  plan.scheme = scheme;
  plan.seed = seed;
  plan.test.assign(ids.begin(), ids.begin() + n_test);
  plan.val.assign(ids.begin() + n_test, ids.begin() + n_test + n_val);
  plan.train.assign(ids.begin() + n_test + n_val, ids.end());
  return plan;
}

std::vector<VertexPair> sample_pairs(const std::vector<uint32_t>& part,
                                     const std::vector<int32_t>& labels, size_t count, Rng& rng) {
  if (part.size() < 2) throw std::invalid_argument("sample_pairs: part has fewer than 2 vertices");
  // Eligibility: a positive pair needs a repeated label, a negative pair two
  // distinct labels.
  bool has_pos = false, has_neg = false;
  {
    std::vector<int32_t> seen;
    for (uint32_t v : part) {
      int32_t l = labels.at(v);
      if (std::find(seen.begin(), seen.end(), l) != seen.end())
        has_pos = true;
      else
        seen.push_back(l);
    }
    has_neg = seen.size() > 1;
  }
  if (!has_pos) throw std::invalid_argument("sample_pairs: no positive pair exists in part");
  if (!has_neg) throw std::invalid_argument("sample_pairs: no negative pair exists in part");

  std::vector<VertexPair> out;
  out.reserve(count);
  for (int want_pos = 1; want_pos >= 0; --want_pos) {
    size_t need = count / 2;
    while (need > 0) {
      uint32_t i = uint32_t(rng.uniform_int(part.size()));
      uint32_t j = uint32_t(rng.uniform_int(part.size()));
      if (i == j) continue;
      uint32_t a = part[i], b = part[j];
      bool same = labels[a] == labels[b];
      if (same != bool(want_pos)) continue;
      out.push_back({a, b, double(want_pos)});
      --need;
    }
  }
  return out;
}

double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("roc_auc: length mismatch");
  size_t n = scores.size();
  double npos = 0.0;
  for (double y : labels) npos += y != 0.0 ? 1.0 : 0.0;
  double nneg = double(n) - npos;
  if (npos == 0.0 || nneg == 0.0) throw std::invalid_argument("roc_auc: single-class input");

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return scores[a] < scores[b]; });
  // Midranks: tied scores share the average of their 1-based rank range. The
  // averages are exact halves, so the whole statistic stays exact in floats.
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double midrank = 0.5 * (double(i + 1) + double(j));
    for (size_t k = i; k < j; ++k)
      if (labels[order[k]] != 0.0) rank_sum_pos += midrank;
    i = j;
  }
  double u = rank_sum_pos - npos * (npos + 1.0) / 2.0;
  return u / (npos * nneg);
}

double relative_improvement(double metric_new, double metric_base) {
  if (metric_base == 0.0) throw std::invalid_argument("relative_improvement: zero base");
  return std::abs(metric_new - metric_base) / metric_base * 100.0;
}

namespace {

// Conditional centrality of a single layer: dominant eigenvector of the layer
// adjacency normalized to unit sum. Layers without usable spectrum (empty or
// all-zero) fall back to uniform mass.
std::vector<double> layer_conditional_cc(const TemporalMultilayerGraph& g, uint32_t t) {
  auto adj = layer_adjacency(g, t);
  std::vector<double> cc(g.num_nodes, 1.0 / double(g.num_nodes));
  try {
    EigenPair ev = power_iteration(adj.mat);
    double total = 0.0;
    for (double v : ev.vector) total += std::max(v, 0.0);
    if (total <= 0.0) return cc;
    for (uint32_t n = 0; n < g.num_nodes; ++n) cc[n] = std::max(ev.vector[n], 0.0) / total;
  } catch (const SpectralError&) {
    // keep uniform
  }
  return cc;
}

}  // namespace

EmbedPipeline build_embed_pipeline(const TemporalMultilayerGraph& g, const ClassifyConfig& cfg) {
  EmbedPipeline pipe;
  const uint32_t N = g.num_nodes, T = g.num_layers;

  if (cfg.scheme == SplitScheme::SingleSupragraph) {
    std::vector<double> cc_node;
    if (T >= 2) {
      auto coupling = interlayer_matrix(T, cfg.delta, cfg.coupling, cfg.gamma);
      if (cfg.fixed_omega) {
        pipe.omega = *cfg.fixed_omega;
        auto summary = centralities(build_supracentrality(g, pipe.omega, coupling));
        cc_node.assign(N, 0.0);
        for (uint32_t v = 0; v < N; ++v) {
          double acc = 0.0;
          for (uint32_t t = 0; t < T; ++t) acc += summary.cc_at(v, t);
          cc_node[v] = acc / T;
        }
      } else {
        auto st = stationary_cc(g, coupling, cfg.omega_search);
        pipe.omega = st.selection.omega;
        cc_node = st.cc;
      }
    } else {
      cc_node = layer_conditional_cc(g, 0);
    }
    auto skeleton = supra_skeleton(g, cfg.delta, !cfg.intra_only);
    pipe.dmaps.push_back(truncated_distances(skeleton, std::max(2u, cfg.pgnn.q)));
    pipe.anchors = sample_anchor_sets(g.node_layer_count(), cfg.anchor_copies, cfg.seed);
    pipe.vertex_cc.push_back(expand_cc_to_vertices(cc_node, T));
    pipe.plans.push_back(
        build_pgnn_plan(pipe.anchors, pipe.dmaps[0], pipe.vertex_cc[0], cfg.pgnn));
    pipe.features.push_back(supra_node_features(g, cc_node));
  } else {
    for (uint32_t t = 0; t < T; ++t) {
      auto cc = layer_conditional_cc(g, t);
      pipe.dmaps.push_back(truncated_distances(layer_skeleton(g, t), std::max(2u, cfg.pgnn.q)));
      auto fam = sample_anchor_sets(N, cfg.anchor_copies,
                                    substream_seed(cfg.seed, "anchors/layer" + std::to_string(t)));
      if (t == 0) pipe.anchors = fam;
      pipe.vertex_cc.push_back(cc);
      pipe.plans.push_back(build_pgnn_plan(fam, pipe.dmaps[t], cc, cfg.pgnn));
      pipe.features.push_back(layer_node_features(g, t, cc));
    }
  }

  pipe.dim = uint32_t(pipe.plans[0].num_sets);
  pipe.total_vertices = g.node_layer_count();
  Rng init = substream(cfg.seed, "init");
  pipe.params = make_pgnn(pipe.store, "pgnn", pipe.features[0].cols(), cfg.pgnn, init);
  return pipe;
}

Tensor embed_forward(const EmbedPipeline& pipe) {
  if (pipe.plans.size() == 1) return pgnn_embed(pipe.plans[0], pipe.params, pipe.features[0]);
  std::vector<Tensor> per_layer;
  per_layer.reserve(pipe.plans.size());
  for (size_t t = 0; t < pipe.plans.size(); ++t)
    per_layer.push_back(pgnn_embed(pipe.plans[t], pipe.params, pipe.features[t]));
  return concat_rows(per_layer);
}

namespace {

void resample_pipeline_anchors(EmbedPipeline& pipe, const ClassifyConfig& cfg, uint32_t epoch) {
  for (size_t i = 0; i < pipe.plans.size(); ++i) {
    uint64_t s = substream_seed(cfg.seed, "anchors/epoch" + std::to_string(epoch) + "/graph" +
                                              std::to_string(i));
    auto fam = sample_anchor_sets(pipe.plans[i].num_vertices, cfg.anchor_copies, s);
    if (i == 0) pipe.anchors = fam;
    pipe.plans[i] = build_pgnn_plan(fam, pipe.dmaps[i], pipe.vertex_cc[i], cfg.pgnn);
  }
}

double pair_logit(const std::vector<double>& z, uint32_t dim, uint32_t a, uint32_t b) {
  const double* za = z.data() + size_t(a) * dim;
  const double* zb = z.data() + size_t(b) * dim;
  double acc = 0.0;
  for (uint32_t c = 0; c < dim; ++c) acc += za[c] * zb[c];
  return acc;
}

double eval_auc(const std::vector<double>& z, uint32_t dim, const std::vector<VertexPair>& pairs) {
  std::vector<double> scores, labels;
  scores.reserve(pairs.size());
  labels.reserve(pairs.size());
  for (const auto& p : pairs) {
    scores.push_back(pair_logit(z, dim, p.a, p.b));
    labels.push_back(p.label);
  }
  return roc_auc(scores, labels);
}

std::vector<uint32_t> part_vertices(const std::vector<uint32_t>& part, SplitScheme scheme,
                                    uint32_t N, uint32_t T) {
  if (scheme == SplitScheme::SingleSupragraph) return part;
  std::vector<uint32_t> out;
  out.reserve(part.size() * T);
  for (uint32_t t = 0; t < T; ++t)
    for (uint32_t n : part) out.push_back(n + N * t);
  return out;
}

}  // namespace

ClassifyReport train_pairwise(const TemporalMultilayerGraph& g, const ClassifyConfig& cfg) {
  if (!g.has_labels()) throw std::invalid_argument("train_pairwise: graph has no labels");
  for (int32_t l : g.node_labels)
    if (l < 0) throw std::invalid_argument("train_pairwise: every node needs a community label");

  EmbedPipeline pipe = build_embed_pipeline(g, cfg);
  const uint32_t N = g.num_nodes, T = g.num_layers;

  std::vector<int32_t> vertex_labels(g.node_layer_count());
  for (uint32_t t = 0; t < T; ++t)
    for (uint32_t n = 0; n < N; ++n) vertex_labels[n + N * t] = g.node_labels[n];

  size_t split_universe =
      cfg.scheme == SplitScheme::SingleSupragraph ? g.node_layer_count() : N;
  SplitPlan split = make_split(split_universe, cfg.scheme, substream_seed(cfg.seed, "splits"));
  auto train_part = part_vertices(split.train, cfg.scheme, N, T);
  auto val_part = part_vertices(split.val, cfg.scheme, N, T);
  auto test_part = part_vertices(split.test, cfg.scheme, N, T);

  Rng val_rng = substream(cfg.seed, "pairs/val");
  Rng test_rng = substream(cfg.seed, "pairs/test");
  Rng train_rng = substream(cfg.seed, "pairs/train");
  auto val_pairs = sample_pairs(val_part, vertex_labels, cfg.val_pairs, val_rng);
  auto test_pairs = sample_pairs(test_part, vertex_labels, cfg.test_pairs, test_rng);

  Adam opt(pipe.store, cfg.adam);
  ClassifyReport report;
  report.omega = pipe.omega;
  report.embed_dim = pipe.dim;
  double best_val = -1.0;
  std::vector<std::vector<double>> best_snap;
  uint32_t best_anchor_epoch = 0;  // the model is params + anchors; restore both

  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.resample_anchors && epoch > 0) resample_pipeline_anchors(pipe, cfg, epoch);

    auto train_batch = sample_pairs(train_part, vertex_labels, cfg.train_pairs, train_rng);
    Tensor Z = embed_forward(pipe);
    std::vector<uint32_t> ia, ib;
    std::vector<double> ys;
    ia.reserve(train_batch.size());
    ib.reserve(train_batch.size());
    for (const auto& p : train_batch) {
      ia.push_back(p.a);
      ib.push_back(p.b);
      ys.push_back(p.label);
    }
    Tensor logits = rowsum(mul(gather_rows(Z, ia), gather_rows(Z, ib)));
    Tensor loss = bce_logits(logits, ys);
    pipe.store.zero_grad();
    loss.backward();
    opt.step();
    report.final_train_loss = loss.item();
    ++report.epochs_run;

    Tensor Zeval = embed_forward(pipe);
    double val_auc = eval_auc(Zeval.value(), pipe.dim, val_pairs);
    if (val_auc > best_val) {
      best_val = val_auc;
      best_snap = snapshot(pipe.store);
      best_anchor_epoch = epoch;
      report.best_epoch = epoch;
    }
  }

  if (!best_snap.empty()) {
    restore(pipe.store, best_snap);
    if (cfg.resample_anchors && best_anchor_epoch + 1 != report.epochs_run) {
      if (best_anchor_epoch > 0) {
        resample_pipeline_anchors(pipe, cfg, best_anchor_epoch);
      } else {  // put back the anchors the pipeline was built with
        for (size_t i = 0; i < pipe.plans.size(); ++i) {
          uint64_t s = cfg.scheme == SplitScheme::SingleSupragraph
                           ? cfg.seed
                           : substream_seed(cfg.seed, "anchors/layer" + std::to_string(i));
          auto fam = sample_anchor_sets(pipe.plans[i].num_vertices, cfg.anchor_copies, s);
          if (i == 0) pipe.anchors = fam;
          pipe.plans[i] = build_pgnn_plan(fam, pipe.dmaps[i], pipe.vertex_cc[i], cfg.pgnn);
        }
      }
    }
  }
  Tensor Zbest = embed_forward(pipe);
  report.best_val_auc = best_val;
  report.test_auc = eval_auc(Zbest.value(), pipe.dim, test_pairs);
  return report;
}

EmbedResult compute_embeddings(const TemporalMultilayerGraph& g, const ClassifyConfig& cfg) {
  EmbedPipeline pipe = build_embed_pipeline(g, cfg);
  Tensor Z = embed_forward(pipe);
  EmbedResult out;
  out.z = Z.value();
  out.dim = pipe.dim;
  out.omega = pipe.omega;
  out.anchors = pipe.anchors;
  return out;
}

}  // namespace tmpgnn
