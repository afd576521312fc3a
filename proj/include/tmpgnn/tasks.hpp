// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "tmpgnn/pgnn.hpp"
#include "tmpgnn/spectral.hpp"

namespace tmpgnn {

enum class SplitScheme { SingleSupragraph, MultigraphNodeSplit };

// 80/10/10 partition of either the node-layer set (single supragraph) or the
// node set applied to every layer (multigraph).
struct SplitPlan {
  SplitScheme scheme = SplitScheme::SingleSupragraph;
  uint64_t seed = 0;
  std::vector<uint32_t> train, val, test;  // node-layer ids, or node ids for multigraph
};

SplitPlan make_split(size_t universe, SplitScheme scheme, uint64_t seed);

struct VertexPair {
  uint32_t a = 0, b = 0;
  double label = 0.0;  // 1 = same community
};

// count/2 positive and count/2 negative pairs drawn uniformly over eligible
// (distinct-endpoint) pairs inside the part, by rejection.
std::vector<VertexPair> sample_pairs(const std::vector<uint32_t>& part,
                                     const std::vector<int32_t>& labels, size_t count, Rng& rng);

// Mann-Whitney rank statistic with midrank ties. Throws when only one class
// is present. Invariant under strictly monotone score transforms.
double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels);

// |a - b| / b * 100.
double relative_improvement(double metric_new, double metric_base);

struct ClassifyConfig {
  SplitScheme scheme = SplitScheme::SingleSupragraph;
  PgnnConfig pgnn;
  uint32_t anchor_copies = 1;
  bool resample_anchors = false;  // fresh anchors every epoch
  bool intra_only = false;        // drop inter-layer edges from hop distances
  CouplingMode coupling = CouplingMode::Chain;
  double gamma = 0.0;
  uint32_t delta = 1;
  std::optional<double> fixed_omega;  // bypass the automatic search
  OmegaSearchOptions omega_search;
  uint32_t epochs = 100;
  size_t train_pairs = 1000, val_pairs = 200, test_pairs = 200;
  AdamOptions adam;
  uint64_t seed = 0;
};

struct ClassifyReport {
  double test_auc = 0.0;
  double best_val_auc = 0.0;
  uint32_t best_epoch = 0;
  uint32_t epochs_run = 0;
  double omega = 0.0;       // 0 when the multigraph path never builds a supra matrix
  double final_train_loss = 0.0;
  uint32_t embed_dim = 0;
};

// Full pairwise-classification run: centralities, anchors, P-GNN training
// with best-validation checkpointing, test AUC of the checkpoint.
ClassifyReport train_pairwise(const TemporalMultilayerGraph& g, const ClassifyConfig& cfg);

// Everything needed to run P-GNN forward passes repeatedly: one plan for the
// supragraph scheme, one per layer for the multigraph scheme. The store owns
// the trainable parameters, so callers can keep optimizing through it.
struct EmbedPipeline {
  std::vector<PgnnPlan> plans;
  std::vector<Tensor> features;
  std::vector<TruncatedDistanceMap> dmaps;
  std::vector<std::vector<double>> vertex_cc;  // parallel to plans
  ParamStore store;
  PgnnParams params;
  AnchorSetFamily anchors;  // supragraph family, or layer 0's in multigraph mode
  double omega = 0.0;
  uint32_t dim = 0;
  size_t total_vertices = 0;
};

EmbedPipeline build_embed_pipeline(const TemporalMultilayerGraph& g, const ClassifyConfig& cfg);

// Differentiable forward pass; rows follow the node-layer index.
Tensor embed_forward(const EmbedPipeline& pipe);

// Embeddings alone (no pair training), for the embed subcommand: rows follow
// the node-layer index. Multigraph mode stacks per-layer embeddings.
struct EmbedResult {
  std::vector<double> z;  // (N*T) x dim row-major
  uint32_t dim = 0;
  double omega = 0.0;
  AnchorSetFamily anchors;  // supragraph mode; first layer's family otherwise
};

EmbedResult compute_embeddings(const TemporalMultilayerGraph& g, const ClassifyConfig& cfg);

}  // namespace tmpgnn
