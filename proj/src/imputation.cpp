// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/imputation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace tmpgnn {

std::vector<double> delta_from_mask(const std::vector<double>& mask) {
  std::vector<double> out(mask.size(), 0.0);
  for (size_t t = 1; t < mask.size(); ++t)
    out[t] = mask[t - 1] != 0.0 ? 1.0 : out[t - 1] + 1.0;
  return out;
}

namespace {

void recompute_deltas(MaskedSeries& s) {
  const uint32_t T = s.num_layers;
  std::vector<double> row(T);
  for (uint32_t e = 0; e < s.num_edges; ++e)
    for (uint32_t d = 0; d < s.num_streams; ++d) {
      for (uint32_t t = 0; t < T; ++t) row[t] = s.m[s.idx(e, d, t)];
      auto gaps = delta_from_mask(row);
      for (uint32_t t = 0; t < T; ++t) s.delta[s.idx(e, d, t)] = gaps[t];
    }
}

}  // namespace

MaskedSeries build_series(const TemporalMultilayerGraph& g) {
  MaskedSeries s;
  s.num_streams = g.num_streams;
  s.num_layers = g.num_layers;
  for (const auto& e : g.edges) s.edges.emplace_back(e.src, e.dst);
  std::sort(s.edges.begin(), s.edges.end());
  s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
  s.num_edges = uint32_t(s.edges.size());

  size_t cells = size_t(s.num_edges) * s.num_streams * s.num_layers;
  s.z.assign(cells, 0.0);
  s.m.assign(cells, 0.0);
  s.delta.assign(cells, 0.0);
  for (const auto& e : g.edges) {
    auto it = std::lower_bound(s.edges.begin(), s.edges.end(), std::make_pair(e.src, e.dst));
    uint32_t row = uint32_t(it - s.edges.begin());
    for (uint32_t d = 0; d < s.num_streams; ++d) {
      s.z[s.idx(row, d, e.layer)] = e.features[d];
      s.m[s.idx(row, d, e.layer)] = 1.0;
    }
  }
  recompute_deltas(s);
  return s;
}

MaskedSeries mask_remove(const TemporalMultilayerGraph& g, double tau, uint64_t seed) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("mask_remove: tau must lie strictly between 0 and 1");
  MaskedSeries s = build_series(g);
  Rng rng = substream(seed, "masks");
  for (uint32_t e = 0; e < s.num_edges; ++e)
    for (uint32_t d = 0; d < s.num_streams; ++d)
      for (uint32_t t = 0; t < s.num_layers; ++t) {
        size_t i = s.idx(e, d, t);
        if (s.m[i] == 0.0) continue;
        if (!rng.bernoulli(tau)) continue;
        s.removed.push_back({e, d, t, s.z[i]});
        s.z[i] = 0.0;
        s.m[i] = 0.0;
      }
  recompute_deltas(s);
  return s;
}

TemporalMultilayerGraph masked_graph(const TemporalMultilayerGraph& g, const MaskedSeries& s) {
  TemporalMultilayerGraph out = g;
  for (const auto& cell : s.removed) {
    auto [src, dst] = s.edges[cell.edge];
    auto it = std::lower_bound(out.edges.begin(), out.edges.end(), cell,
                               [&](const TemporalEdge& e, const RemovedCell& c) {
                                 return std::tie(e.layer, e.src, e.dst) <
                                        std::tie(c.layer, src, dst);
                               });
    if (it == out.edges.end() || it->layer != cell.layer || it->src != src || it->dst != dst)
      throw std::logic_error("masked_graph: removed cell points at no edge");
    it->features[cell.stream] = 0.0;
  }
  return out;
}

ImputerParams make_imputer(ParamStore& store, const std::string& prefix, const ImputerConfig& cfg,
                           uint32_t data_streams, uint32_t embed_dim, Rng& rng) {
  if (data_streams == 0) throw std::invalid_argument("make_imputer: no data streams");
  ImputerParams p;
  p.arch = cfg.arch;
  p.data_streams = data_streams;
  p.hidden = cfg.hidden;
  p.embed_dim = cfg.arch == ImputerArch::Mrnn ? 0 : embed_dim;
  p.input_streams =
      cfg.arch == ImputerArch::Etmpgnn1 ? data_streams + p.embed_dim : data_streams;

  const uint32_t S = p.input_streams, D = data_streams, H = cfg.hidden;
  p.fwd = make_gru(store, prefix + ".fwd", 3 * S, H, rng);
  p.bwd = make_gru(store, prefix + ".bwd", 3 * S, H, rng);
  if (cfg.arch == ImputerArch::Etmpgnn2) {
    if (p.embed_dim == 0)
      throw std::invalid_argument("make_imputer: fusion architecture needs embeddings");
    uint32_t mix_cols = cfg.mix_per_unit ? 2 * H : 1;
    p.Wp = store.create(prefix + ".Wp", p.embed_dim, 2 * H, rng);
    p.bp = store.create_zeros(prefix + ".bp", 1, 2 * H);
    p.theta_p = store.create_zeros(prefix + ".theta_p", 1, mix_cols);
    p.theta_b = store.create_zeros(prefix + ".theta_b", 1, mix_cols);
    p.S = store.create(prefix + ".S", 2 * H, D, rng);
    p.alpha = store.create_zeros(prefix + ".alpha", 1, D);
    p.w = store.create(prefix + ".w", 2 * H, D, rng);
    p.beta = store.create_zeros(prefix + ".beta", 1, D);
  } else {
    p.U = store.create(prefix + ".U", 2 * H, S, rng);
    p.c = store.create_zeros(prefix + ".c", 1, S);
    p.W = store.create(prefix + ".W", S, D, rng);
    p.b = store.create_zeros(prefix + ".b", 1, D);
  }
  return p;
}

ImputerOutput imputer_forward(const ImputerParams& p, const MaskedSeries& s,
                              const std::vector<Tensor>& embed_steps) {
  const uint32_t E = s.num_edges, D = s.num_streams, T = s.num_layers;
  const uint32_t S = p.input_streams;
  if (D != p.data_streams) throw std::invalid_argument("imputer_forward: stream count mismatch");
  bool needs_embed =
      (p.arch == ImputerArch::Etmpgnn1 && p.embed_dim > 0) || p.arch == ImputerArch::Etmpgnn2;
  if (needs_embed) {
    if (embed_steps.size() != T)
      throw std::invalid_argument("imputer_forward: one embedding tensor per layer required");
    for (const auto& t : embed_steps)
      if (t.rows() != E || t.cols() != p.embed_dim)
        throw std::invalid_argument("imputer_forward: embedding shape mismatch");
  } else if (!embed_steps.empty()) {
    throw std::invalid_argument("imputer_forward: architecture takes no embeddings");
  }

  std::vector<Tensor> xs;
  xs.reserve(T);
  for (uint32_t t = 0; t < T; ++t) {
    std::vector<double> vals(size_t(E) * D), msk(size_t(E) * S, 1.0), dlt(size_t(E) * S, 0.0);
    for (uint32_t e = 0; e < E; ++e)
      for (uint32_t d = 0; d < D; ++d) {
        vals[size_t(e) * D + d] = s.z_at(e, d, t);
        msk[size_t(e) * S + d] = s.m_at(e, d, t);
        dlt[size_t(e) * S + d] = s.delta_at(e, d, t);
      }
    Tensor v = Tensor::from(E, D, std::move(vals));
    if (p.arch == ImputerArch::Etmpgnn1 && p.embed_dim > 0)
      v = concat_cols({v, embed_steps[t]});
    xs.push_back(concat_cols(
        {v, Tensor::from(E, S, std::move(msk)), Tensor::from(E, S, std::move(dlt))}));
  }
  std::vector<Tensor> hs = bigru(xs, p.fwd, p.bwd);

  std::vector<Tensor> xhats, xtildes;
  xhats.reserve(T);
  xtildes.reserve(T);
  if (p.arch == ImputerArch::Etmpgnn2) {
    Tensor wp = sigmoid(sub(p.theta_p, p.theta_b));
    Tensor wb = sub(Tensor::full(1, wp.cols(), 1.0), wp);
    bool per_unit = wp.cols() > 1;
    for (uint32_t t = 0; t < T; ++t) {
      Tensor h_embed = sigmoid(add_rowvec(matmul(embed_steps[t], p.Wp), p.bp));
      Tensor h_pgb = per_unit ? add(mul_rowvec(h_embed, wp), mul_rowvec(hs[t], wb))
                              : add(mul_scalar(h_embed, wp), mul_scalar(hs[t], wb));
      xtildes.push_back(sigmoid(add_rowvec(matmul(h_pgb, p.S), p.alpha)));
      xhats.push_back(sigmoid(add_rowvec(matmul(h_pgb, p.w), p.beta)));
    }
  } else {
    for (uint32_t t = 0; t < T; ++t) {
      Tensor xt = sigmoid(add_rowvec(matmul(hs[t], p.U), p.c));
      xtildes.push_back(xt);
      xhats.push_back(sigmoid(add_rowvec(matmul(xt, p.W), p.b)));
    }
  }
  return {concat_rows(xhats), concat_rows(xtildes)};
}

namespace {

// Observed-cell targets and masks in the step-major output layout.
void output_layout(const MaskedSeries& s, std::vector<double>& target, std::vector<double>& mask) {
  const uint32_t E = s.num_edges, D = s.num_streams, T = s.num_layers;
  target.assign(size_t(E) * T * D, 0.0);
  mask.assign(size_t(E) * T * D, 0.0);
  for (uint32_t t = 0; t < T; ++t)
    for (uint32_t e = 0; e < E; ++e)
      for (uint32_t d = 0; d < D; ++d) {
        size_t row = size_t(t) * E + e;
        target[row * D + d] = s.z_at(e, d, t);
        mask[row * D + d] = s.m_at(e, d, t);
      }
}

struct RemovedMetrics {
  double mae = 0.0, rmse = 0.0;
};

RemovedMetrics score_removed(const std::vector<double>& xhat, const MaskedSeries& s,
                             const std::vector<uint32_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("score_removed: no removed cells to score");
  const uint32_t E = s.num_edges, D = s.num_streams;
  double abs_acc = 0.0, sq_acc = 0.0;
  for (uint32_t i : subset) {
    const RemovedCell& cell = s.removed[i];
    size_t row = size_t(cell.layer) * E + cell.edge;
    double err = xhat[row * D + cell.stream] - cell.value;
    abs_acc += std::abs(err);
    sq_acc += err * err;
  }
  return {abs_acc / double(subset.size()), std::sqrt(sq_acc / double(subset.size()))};
}

}  // namespace

Tensor imputer_loss(const ImputerParams& p, const ImputerOutput& out, const MaskedSeries& s) {
  std::vector<double> target, mask;
  output_layout(s, target, mask);
  Tensor main = masked_mse(out.xhat, target, mask);
  if (p.arch != ImputerArch::Etmpgnn2) return main;
  return add(main, masked_mse(out.xtilde, std::move(target), std::move(mask)));
}

ImputeReport train_imputer(const TemporalMultilayerGraph& g, const ImputerConfig& cfg) {
  if (g.num_streams == 0)
    throw std::invalid_argument("train_imputer: graph has no feature streams");
  MaskedSeries series = mask_remove(g, cfg.tau, cfg.seed);
  if (series.removed.empty())
    throw std::runtime_error("train_imputer: removal left nothing to evaluate");
  if (std::accumulate(series.m.begin(), series.m.end(), 0.0) == 0.0)
    throw std::runtime_error("train_imputer: no observed cells to train on");

  // Half the hidden cells steer early stopping, the other half stay untouched
  // until the final score.
  std::vector<uint32_t> order(series.removed.size());
  std::iota(order.begin(), order.end(), 0u);
  Rng split_rng = substream(cfg.seed, "masks/split");
  for (size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[split_rng.uniform_int(i + 1)]);
  std::vector<uint32_t> val_cells(order.begin(), order.begin() + order.size() / 2);
  std::vector<uint32_t> eval_cells(order.begin() + order.size() / 2, order.end());

  bool needs_embed =
      (cfg.arch == ImputerArch::Etmpgnn1 && cfg.embed_dim > 0) || cfg.arch == ImputerArch::Etmpgnn2;
  if (cfg.arch == ImputerArch::Etmpgnn2 && cfg.embed_dim == 0)
    throw std::invalid_argument("train_imputer: fusion architecture needs embed_dim > 0");

  std::optional<EmbedPipeline> pipe;
  uint32_t embed_dim = 0;
  std::vector<std::vector<uint32_t>> rows_a, rows_b;
  if (needs_embed) {
    ClassifyConfig ecfg = cfg.embed;
    ecfg.scheme = SplitScheme::SingleSupragraph;
    ecfg.seed = cfg.seed;
    uint32_t k = anchor_scale_count(g.node_layer_count());
    ecfg.anchor_copies = std::max<uint32_t>(1, (cfg.embed_dim + k - 1) / k);
    pipe.emplace(build_embed_pipeline(masked_graph(g, series), ecfg));
    embed_dim = pipe->dim;
    rows_a.resize(g.num_layers);
    rows_b.resize(g.num_layers);
    for (uint32_t t = 0; t < g.num_layers; ++t)
      for (auto [src, dst] : series.edges) {
        rows_a[t].push_back(src + g.num_nodes * t);
        rows_b[t].push_back(dst + g.num_nodes * t);
      }
  }

  ParamStore store;
  Rng init = substream(cfg.seed, "imp/init");
  ImputerParams params = make_imputer(store, "imp", cfg, g.num_streams, embed_dim, init);
  Adam opt(store, cfg.adam);
  std::optional<Adam> embed_opt;
  bool joint = needs_embed && !cfg.freeze_embeddings;
  if (joint) embed_opt.emplace(pipe->store, cfg.adam);

  // Frozen embeddings become plain constants; joint training rebuilds the
  // differentiable P-GNN graph every epoch.
  std::vector<Tensor> frozen_steps;
  auto make_embed_steps = [&]() -> std::vector<Tensor> {
    if (!needs_embed) return {};
    if (cfg.freeze_embeddings && !frozen_steps.empty()) return frozen_steps;
    Tensor Z = embed_forward(*pipe);
    std::vector<Tensor> steps;
    steps.reserve(g.num_layers);
    for (uint32_t t = 0; t < g.num_layers; ++t) {
      Tensor e = edge_embedding(Z, rows_a[t], rows_b[t]);
      steps.push_back(cfg.freeze_embeddings ? Tensor::from(e.rows(), e.cols(), e.value()) : e);
    }
    if (cfg.freeze_embeddings) frozen_steps = steps;
    return steps;
  };

  ImputeReport report;
  report.arch = cfg.arch;
  report.tau = cfg.tau;
  report.embed_dim = embed_dim;
  report.removed_cells = series.removed.size();
  report.omega = pipe ? pipe->omega : 0.0;

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_imp, best_embed;
  uint32_t stale = 0;

  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    ImputerOutput out = imputer_forward(params, series, make_embed_steps());
    Tensor loss = imputer_loss(params, out, series);
    if (!std::isfinite(loss.item()))
      throw std::runtime_error("train_imputer: non-finite loss at epoch " +
                               std::to_string(epoch));
    store.zero_grad();
    if (joint) pipe->store.zero_grad();
    loss.backward();
    opt.step();
    if (joint) embed_opt->step();
    report.final_train_loss = loss.item();
    ++report.epochs_run;

    ImputerOutput scored = imputer_forward(params, series, make_embed_steps());
    if (!val_cells.empty()) {
      double val_rmse = score_removed(scored.xhat.value(), series, val_cells).rmse;
      if (val_rmse < best_val) {
        best_val = val_rmse;
        best_imp = snapshot(store);
        if (joint) best_embed = snapshot(pipe->store);
        report.best_epoch = epoch;
        stale = 0;
      } else if (cfg.early_stop_patience > 0 && ++stale >= cfg.early_stop_patience) {
        break;
      }
    }
  }

  if (!best_imp.empty()) {
    restore(store, best_imp);
    if (joint && !best_embed.empty()) restore(pipe->store, best_embed);
  }
  ImputerOutput final_out = imputer_forward(params, series, make_embed_steps());
  RemovedMetrics metrics = score_removed(final_out.xhat.value(), series, eval_cells);
  report.mae = metrics.mae;
  report.rmse = metrics.rmse;
  report.val_rmse = best_val;
  return report;
}

std::vector<ImputeReport> impute_grid(const TemporalMultilayerGraph& g, const ImputerConfig& cfg,
                                      const std::vector<double>& taus) {
  std::vector<ImputeReport> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    ImputerConfig c = cfg;
    c.tau = tau;
    out.push_back(train_imputer(g, c));
  }
  return out;
}

}  // namespace tmpgnn
