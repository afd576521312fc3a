// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmpgnn/csr.hpp"
#include "tmpgnn/rng.hpp"

namespace tmpgnn {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TemporalEdge {
  uint32_t layer = 0;
  uint32_t src = 0;
  uint32_t dst = 0;
  std::vector<double> features;  // exactly num_streams entries
};

// Discrete-time multilayer graph: a fixed node set observed over T layers,
// with per-layer weighted directed edges carrying D feature streams.
// Immutable after construction; concurrent reads are safe.
struct TemporalMultilayerGraph {
  uint32_t num_nodes = 0;
  uint32_t num_layers = 0;
  uint32_t num_streams = 0;
  uint32_t sampling_interval = 1;  // layer-index units
  bool directed = true;
  std::vector<TemporalEdge> edges;      // sorted by (layer, src, dst), unique
  std::vector<int32_t> node_labels;     // community per node; empty when unlabeled

  bool has_labels() const { return !node_labels.empty(); }
  size_t node_layer_count() const { return size_t(num_nodes) * num_layers; }
  // Node-layer linear index for node n at layer t.
  size_t nl_index(uint32_t n, uint32_t t) const { return size_t(n) + size_t(num_nodes) * t; }

  void validate() const;  // throws GraphError on any invariant violation
};

struct GraphSummary {
  uint32_t num_nodes = 0;
  uint32_t num_layers = 0;
  uint32_t num_streams = 0;
  size_t total_edges = 0;       // sum over layers of |E^(t)|
  size_t node_layer_count = 0;  // N*T
  size_t llcc = 0;              // largest connected component of the node-layer graph
  size_t isolated = 0;          // N*T - llcc
};

// Component analysis over node-layer pairs: intra-layer edges plus chain
// edges between consecutive instances of nodes that touch at least one
// intra-layer edge somewhere. Isolated count is N*T - LLCC.
GraphSummary summarize(const TemporalMultilayerGraph& g);

// Which scalar an adjacency entry carries when an edge has D streams.
struct StreamSelector {
  static constexpr int kMean = -1;
  int index = 0;  // stream index, or kMean for the arithmetic mean

  static StreamSelector stream(int i) { return StreamSelector{i}; }
  static StreamSelector mean() { return StreamSelector{kMean}; }
};

struct LayerAdjacency {
  uint32_t layer = 0;
  CsrMatrix mat;  // N x N
};

LayerAdjacency layer_adjacency(const TemporalMultilayerGraph& g, uint32_t t,
                               StreamSelector sel = StreamSelector::stream(0));

enum class SignalKind { Sinusoid, Ar1 };

struct SynthConfig {
  uint32_t num_nodes = 20;
  uint32_t num_layers = 5;
  uint32_t num_streams = 1;
  uint32_t communities = 2;
  double p_in = 0.3;
  double p_out = 0.05;
  double rewire = 0.1;                 // per-edge rewire probability per layer step
  std::vector<SignalKind> signals;     // one per stream; Sinusoid when shorter
  uint64_t seed = 0;
};

// Layer 0 is a K-block stochastic block model; each later layer rewires each
// edge of the previous one with probability `rewire`. Stream values follow
// the per-stream signal model plus noise, deterministic under the seed.
TemporalMultilayerGraph synth_graph(const SynthConfig& cfg);

// Community of node n under the synthesizer's contiguous block assignment.
uint32_t synth_community(uint32_t node, uint32_t num_nodes, uint32_t communities);

// Keep layers 0, k, 2k, ... and relabel them densely.
TemporalMultilayerGraph downsample(const TemporalMultilayerGraph& g, uint32_t k);

}  // namespace tmpgnn
