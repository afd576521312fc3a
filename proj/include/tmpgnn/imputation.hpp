// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tmpgnn/tasks.hpp"

namespace tmpgnn {

// One hidden cell of the series grid. `value` is the withheld original.
struct RemovedCell {
  uint32_t edge = 0, stream = 0, layer = 0;
  double value = 0.0;
};

// Per-edge value/mask/gap arrays over every layer. Edges are the distinct
// (src, dst) pairs seen anywhere in the graph; a pair absent from some layer
// is structurally missing there (mask 0, no ground truth). Flattened layout
// is (edge * D + stream) * T + layer.
struct MaskedSeries {
  uint32_t num_edges = 0, num_streams = 0, num_layers = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  std::vector<double> z;      // observed values, 0 wherever mask is 0
  std::vector<double> m;      // 1 = observed
  std::vector<double> delta;  // layers since the last observation
  std::vector<RemovedCell> removed;

  size_t idx(uint32_t e, uint32_t d, uint32_t t) const {
    return (size_t(e) * num_streams + d) * num_layers + t;
  }
  double z_at(uint32_t e, uint32_t d, uint32_t t) const { return z[idx(e, d, t)]; }
  double m_at(uint32_t e, uint32_t d, uint32_t t) const { return m[idx(e, d, t)]; }
  double delta_at(uint32_t e, uint32_t d, uint32_t t) const { return delta[idx(e, d, t)]; }
};

// delta[0] = 0; delta[t] = 1 if mask[t-1] else delta[t-1] + 1.
std::vector<double> delta_from_mask(const std::vector<double>& mask);

// Series with every structurally present cell observed (no removal).
MaskedSeries build_series(const TemporalMultilayerGraph& g);

// Each structurally present cell is independently hidden with probability
// tau; hidden originals move to `removed`, masks and gaps are recomputed.
MaskedSeries mask_remove(const TemporalMultilayerGraph& g, double tau, uint64_t seed);

// Copy of g with the removed feature cells zeroed, so that anything computed
// from the graph (centralities, node features) never sees hidden values.
TemporalMultilayerGraph masked_graph(const TemporalMultilayerGraph& g, const MaskedSeries& s);

enum class ImputerArch { Mrnn, Etmpgnn1, Etmpgnn2 };

struct ImputerConfig {
  ImputerArch arch = ImputerArch::Mrnn;
  uint32_t hidden = 16;
  uint32_t embed_dim = 8;  // rounded up to whole anchor-scale multiples; 0 disables
  double tau = 0.2;
  uint32_t epochs = 60;
  uint32_t early_stop_patience = 10;  // 0 = never stop early
  bool freeze_embeddings = false;     // train the recurrent side only
  bool mix_per_unit = false;          // per-unit instead of scalar fusion weights
  AdamOptions adam;
  ClassifyConfig embed;  // coupling / anchor / P-GNN knobs for the embedding side
  uint64_t seed = 1;
};

// Trainable pieces. The recurrent core reads, per step, the concatenation of
// values, masks and gaps over `input_streams` streams (data plus, for the
// concatenating architecture, embedding streams). The fusion architecture
// instead projects edge embeddings onto the bi-GRU hidden width and blends
// the two with softmaxed weights.
struct ImputerParams {
  ImputerArch arch = ImputerArch::Mrnn;
  uint32_t data_streams = 0, input_streams = 0, hidden = 0, embed_dim = 0;
  GruParams fwd, bwd;
  Tensor U, c;  // interpolation head: 2H -> input_streams
  Tensor W, b;  // imputation head across streams: input_streams -> D
  Tensor Wp, bp;            // embedding projection: embed_dim -> 2H
  Tensor theta_p, theta_b;  // fusion logits (1x1, or 1x2H per-unit)
  Tensor S, alpha;          // initial-estimate head: 2H -> D
  Tensor w, beta;           // final head: 2H -> D
};

ImputerParams make_imputer(ParamStore& store, const std::string& prefix, const ImputerConfig& cfg,
                           uint32_t data_streams, uint32_t embed_dim, Rng& rng);

// Row layout of both outputs: step-major, row = t * E + e.
struct ImputerOutput {
  Tensor xhat;    // final estimates, (E*T) x D
  Tensor xtilde;  // interpolation / initial estimates
};

// embed_steps: one (E x embed_dim) tensor per layer; empty when unused.
ImputerOutput imputer_forward(const ImputerParams& p, const MaskedSeries& s,
                              const std::vector<Tensor>& embed_steps);

// Mean squared error of xhat over observed data cells; the fusion
// architecture adds the same objective on its initial estimate so that head
// trains too.
Tensor imputer_loss(const ImputerParams& p, const ImputerOutput& out, const MaskedSeries& s);

struct ImputeReport {
  ImputerArch arch = ImputerArch::Mrnn;
  double tau = 0.0;
  double mae = 0.0;       // held-out removed cells
  double rmse = 0.0;      // held-out removed cells
  double val_rmse = 0.0;  // best validation value that picked the checkpoint
  uint32_t best_epoch = 0;
  uint32_t epochs_run = 0;
  double final_train_loss = 0.0;
  uint32_t embed_dim = 0;  // actual width after rounding
  size_t removed_cells = 0;
  double omega = 0.0;  // 0 when no supra matrix was built
};

// Masks the graph, trains with early stopping on validation removed-cell
// RMSE, restores the best checkpoint, scores the held-out removed cells.
ImputeReport train_imputer(const TemporalMultilayerGraph& g, const ImputerConfig& cfg);

// One full training run per threshold.
std::vector<ImputeReport> impute_grid(const TemporalMultilayerGraph& g, const ImputerConfig& cfg,
                                      const std::vector<double>& taus);

}  // namespace tmpgnn
