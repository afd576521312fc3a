// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/pgnn.hpp"

#include <algorithm>
#include <stdexcept>

namespace tmpgnn {

PgnnPlan build_pgnn_plan(const AnchorSetFamily& anchors, const TruncatedDistanceMap& dmap,
                         const std::vector<double>& cc_per_vertex, const PgnnConfig& cfg) {
  if (anchors.universe != dmap.num_nodes)
    throw std::invalid_argument("pgnn plan: anchors and distance map disagree on vertex count");
  if (cc_per_vertex.size() != dmap.num_nodes)
    throw std::invalid_argument("pgnn plan: centrality vector has wrong length");
  if (cfg.full_mode && dmap.q < cfg.q)
    throw std::invalid_argument("pgnn plan: distance map truncated below q");
  if (!cfg.full_mode && dmap.q < 2)
    throw std::invalid_argument("pgnn plan: fast mode needs distances out to 2 hops");

  PgnnPlan plan;
  plan.num_vertices = dmap.num_nodes;
  plan.num_sets = uint32_t(anchors.count());
  plan.seg_offsets.push_back(0);

  const uint32_t J = plan.num_sets;
  std::vector<double> numer(J);
  for (uint32_t v = 0; v < plan.num_vertices; ++v) {
    size_t first_seg = plan.segment_count();
    for (uint32_t j = 0; j < J; ++j) {
      const auto& set = anchors.sets[j];
      // Across-set weight numerator: centrality mass of the set's members
      // sitting 1 or 2 hops from v.
      double cc_mass = 0.0;
      bool any_near = false;
      size_t rows_before = plan.pair_member.size();
      double damp_sum = 0.0;
      uint32_t best_d = UINT32_MAX;
      uint32_t best_u = 0;
      for (uint32_t u : set) {
        int d = dmap.distance(v, u);
        if (d < 0) continue;
        if (d >= 1 && d <= 2) {
          any_near = true;
          if (cfg.cc_weight_max)
            cc_mass = std::max(cc_mass, cc_per_vertex[u]);
          else
            cc_mass += cc_per_vertex[u];
        }
        if (cfg.full_mode) {
          if (uint32_t(d) <= cfg.q) {
            plan.pair_vertex.push_back(v);
            plan.pair_member.push_back(u);
            damp_sum += 1.0 / (double(d) + 1.0);
          }
        } else if (uint32_t(d) <= 2 && (uint32_t(d) < best_d || (uint32_t(d) == best_d && u < best_u))) {
          best_d = uint32_t(d);
          best_u = u;
        }
      }
      if (!cfg.full_mode && best_d != UINT32_MAX) {
        plan.pair_vertex.push_back(v);
        plan.pair_member.push_back(best_u);
        damp_sum = 1.0 / (double(best_d) + 1.0);
      }
      if (plan.pair_member.size() == rows_before) continue;  // set never reaches v
      plan.seg_offsets.push_back(plan.pair_member.size());
      plan.seg_vertex.push_back(v);
      plan.seg_set.push_back(j);
      // Full mode averages over the whole set, zero messages included.
      plan.seg_damp.push_back(cfg.full_mode ? damp_sum / double(set.size()) : damp_sum);
      numer[plan.segment_count() - 1 - first_seg] = any_near ? cc_mass : 0.0;
    }
    size_t nseg = plan.segment_count() - first_seg;
    if (nseg == 0) continue;
    double denom = 0.0;
    for (size_t k = 0; k < nseg; ++k) denom += numer[k];
    for (size_t k = 0; k < nseg; ++k) {
      double r = denom > 0.0 ? numer[k] / denom : 1.0 / double(nseg);
      plan.seg_weight.push_back(r / double(J));
    }
  }
  return plan;
}

PgnnParams make_pgnn(ParamStore& store, const std::string& prefix, size_t in_dim,
                     const PgnnConfig& cfg, Rng& rng) {
  if (cfg.num_layers == 0) throw std::invalid_argument("pgnn: need at least one layer");
  PgnnParams p;
  size_t dim = in_dim;
  for (uint32_t l = 0; l < cfg.num_layers; ++l) {
    std::string base = prefix + ".layer" + std::to_string(l);
    PgnnLayerParams lp;
    lp.W1 = store.create(base + ".W1", dim, cfg.hidden, rng);
    lp.W2 = store.create(base + ".W2", dim, cfg.hidden, rng);
    lp.V = store.create(base + ".V", cfg.hidden, 1, rng);
    lp.Wc = store.create(base + ".Wc", 2 * dim, cfg.hidden, rng);
    p.layers.push_back(std::move(lp));
    dim = cfg.hidden;
  }
  p.w = store.create(prefix + ".w", cfg.hidden, 1, rng);
  return p;
}

Tensor pgnn_embed(const PgnnPlan& plan, const PgnnParams& params, const Tensor& X) {
  if (X.rows() != plan.num_vertices)
    throw std::invalid_argument("pgnn_embed: feature row count mismatch");
  if (params.layers.empty()) throw std::invalid_argument("pgnn_embed: no layers");

  Tensor H = X;
  Tensor M;
  for (size_t l = 0; l < params.layers.size(); ++l) {
    const auto& lp = params.layers[l];
    Tensor Hv = gather_rows(H, plan.pair_vertex);
    Tensor Hu = gather_rows(H, plan.pair_member);
    Tensor score = matmul(tanh(add(matmul(Hv, lp.W1), matmul(Hu, lp.W2))), lp.V);
    Tensor alpha = segment_softmax(score, plan.seg_offsets);
    Tensor context = segment_weighted_sum(Hu, alpha, plan.seg_offsets);
    Tensor Hseg = gather_rows(H, plan.seg_vertex);
    Tensor attended = matmul(concat_cols({context, Hseg}), lp.Wc);
    M = scale_rows(attended, plan.seg_damp);
    if (l + 1 < params.layers.size())
      H = relu(scatter_sum(scale_rows(M, plan.seg_weight), plan.seg_vertex,
                           plan.num_vertices));
  }
  Tensor logits = matmul(M, params.w);
  Tensor grid = scatter_pairs(logits, plan.seg_vertex, plan.seg_set, plan.num_vertices,
                              plan.num_sets);
  return sigmoid(grid);
}

Tensor edge_embedding(const Tensor& Z, std::vector<uint32_t> a, std::vector<uint32_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("edge_embedding: endpoint count mismatch");
  Tensor za = gather_rows(Z, std::move(a));
  Tensor zb = gather_rows(Z, std::move(b));
  return affine(add(za, zb), 0.5, 0.0);
}

namespace {

// Rows of per-stream incident means for one layer's N nodes, plus the cc
// column; width (D or 1) + 1.
void fill_layer_features(const TemporalMultilayerGraph& g, uint32_t t,
                         const std::vector<double>& cc_per_node, std::vector<double>& out,
                         size_t row0, size_t width) {
  const uint32_t N = g.num_nodes, D = g.num_streams;
  std::vector<double> acc(size_t(N) * std::max(D, 1u), 0.0);
  std::vector<uint32_t> deg(N, 0);
  for (const auto& e : g.edges) {
    if (e.layer != t) continue;
    for (uint32_t end = 0; end < 2; ++end) {
      uint32_t n = end == 0 ? e.src : e.dst;
      if (end == 1 && e.src == e.dst) break;  // count self-loops once
      ++deg[n];
      for (uint32_t d = 0; d < D; ++d) acc[size_t(n) * D + d] += e.features[d];
    }
  }
  for (uint32_t n = 0; n < N; ++n) {
    double* row = out.data() + (row0 + n) * width;
    if (D == 0) {
      row[0] = 1.0;
    } else {
      for (uint32_t d = 0; d < D; ++d)
        row[d] = deg[n] > 0 ? acc[size_t(n) * D + d] / deg[n] : 0.0;
    }
    row[width - 1] = cc_per_node[n];
  }
}

}  // namespace

Tensor supra_node_features(const TemporalMultilayerGraph& g,
                           const std::vector<double>& cc_per_node) {
  if (cc_per_node.size() != g.num_nodes)
    throw std::invalid_argument("supra_node_features: centrality length mismatch");
  const size_t width = size_t(std::max(g.num_streams, 1u)) + 1;
  std::vector<double> vals(g.node_layer_count() * width, 0.0);
  for (uint32_t t = 0; t < g.num_layers; ++t)
    fill_layer_features(g, t, cc_per_node, vals, size_t(g.num_nodes) * t, width);
  return Tensor::from(g.node_layer_count(), width, std::move(vals));
}

Tensor layer_node_features(const TemporalMultilayerGraph& g, uint32_t t,
                           const std::vector<double>& cc_per_node) {
  if (cc_per_node.size() != g.num_nodes)
    throw std::invalid_argument("layer_node_features: centrality length mismatch");
  const size_t width = size_t(std::max(g.num_streams, 1u)) + 1;
  std::vector<double> vals(size_t(g.num_nodes) * width, 0.0);
  fill_layer_features(g, t, cc_per_node, vals, 0, width);
  return Tensor::from(g.num_nodes, width, std::move(vals));
}

std::vector<double> expand_cc_to_vertices(const std::vector<double>& cc_per_node,
                                          uint32_t num_layers) {
  std::vector<double> out;
  out.reserve(cc_per_node.size() * num_layers);
  for (uint32_t t = 0; t < num_layers; ++t)
    out.insert(out.end(), cc_per_node.begin(), cc_per_node.end());
  return out;
}

}  // namespace tmpgnn
