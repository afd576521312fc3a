// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tmpgnn/anchors.hpp"
#include "tmpgnn/graph.hpp"
#include "tmpgnn/nn.hpp"

namespace tmpgnn {

struct PgnnConfig {
  uint32_t num_layers = 2;
  uint32_t hidden = 32;
  // Fast mode talks to the single nearest qualifying anchor member (hop
  // distance <= 2); full mode computes a message for every member within q.
  bool full_mode = false;
  uint32_t q = 2;
  // Across-anchor weights take the sum of 1-2-hop member centralities by
  // default; max is the alternative reading.
  bool cc_weight_max = false;
};

// Constant wiring for one (graph, anchors, distances, centralities) combo:
// pair rows are (vertex, anchor member) couples grouped into contiguous
// segments, one segment per (vertex, anchor set) that qualifies.
struct PgnnPlan {
  size_t num_vertices = 0;
  uint32_t num_sets = 0;  // J; also the embedding width
  std::vector<size_t> seg_offsets;    // segments over pair rows
  std::vector<uint32_t> seg_vertex;   // v per segment
  std::vector<uint32_t> seg_set;      // j per segment
  std::vector<uint32_t> pair_vertex;  // v per pair row
  std::vector<uint32_t> pair_member;  // anchor member per pair row
  std::vector<double> seg_damp;       // within-set mean damping factor
  std::vector<double> seg_weight;     // r_vj / J, the across-set weight

  size_t segment_count() const { return seg_vertex.size(); }
};

PgnnPlan build_pgnn_plan(const AnchorSetFamily& anchors, const TruncatedDistanceMap& dmap,
                         const std::vector<double>& cc_per_vertex, const PgnnConfig& cfg);

struct PgnnLayerParams {
  Tensor W1, W2, V;  // attention: score = tanh(h_v W1 + h_u W2) V
  Tensor Wc;         // a_v = concat(c_v, h_v) Wc
};

struct PgnnParams {
  std::vector<PgnnLayerParams> layers;
  Tensor w;  // final hidden -> logit weight
};

PgnnParams make_pgnn(ParamStore& store, const std::string& prefix, size_t in_dim,
                     const PgnnConfig& cfg, Rng& rng);

// X holds one feature row per vertex; the result is num_vertices x J with
// sigmoid outputs. Vertices no anchor set reaches come out at sigmoid(0).
Tensor pgnn_embed(const PgnnPlan& plan, const PgnnParams& params, const Tensor& X);

// Elementwise mean of the two endpoint embeddings.
Tensor edge_embedding(const Tensor& Z, std::vector<uint32_t> a, std::vector<uint32_t> b);

// Input features per supra vertex: per-stream means over edges incident at
// that layer (a constant-1 column when the graph carries no streams), plus
// the node's stationary conditional centrality.
Tensor supra_node_features(const TemporalMultilayerGraph& g,
                           const std::vector<double>& cc_per_node);
// Same recipe for a single layer's vertex set of N nodes.
Tensor layer_node_features(const TemporalMultilayerGraph& g, uint32_t t,
                           const std::vector<double>& cc_per_node);

// Copy a per-node score onto every layer copy of the node.
std::vector<double> expand_cc_to_vertices(const std::vector<double>& cc_per_node,
                                          uint32_t num_layers);

}  // namespace tmpgnn
