// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>
#include <unordered_set>

namespace tmpgnn {

void TemporalMultilayerGraph::validate() const {
  if (num_nodes == 0) throw GraphError("graph has no nodes");
  if (num_layers == 0) throw GraphError("graph has no layers");
  if (sampling_interval == 0) throw GraphError("sampling interval must be positive");
  if (!node_labels.empty() && node_labels.size() != num_nodes)
    throw GraphError("label count " + std::to_string(node_labels.size()) +
                     " does not match node count " + std::to_string(num_nodes));
  const TemporalEdge* prev = nullptr;
  for (const auto& e : edges) {
    if (e.layer >= num_layers)
      throw GraphError("edge layer " + std::to_string(e.layer) + " out of range");
    if (e.src >= num_nodes || e.dst >= num_nodes)
      throw GraphError("edge endpoint out of range at layer " + std::to_string(e.layer));
    if (e.features.size() != num_streams)
      throw GraphError("edge feature width " + std::to_string(e.features.size()) +
                       " does not match stream count " + std::to_string(num_streams));
    if (prev) {
      auto ka = std::tie(prev->layer, prev->src, prev->dst);
      auto kb = std::tie(e.layer, e.src, e.dst);
      if (ka == kb)
        throw GraphError("duplicate edge (" + std::to_string(e.layer) + "," +
                         std::to_string(e.src) + "," + std::to_string(e.dst) + ")");
      if (kb < ka) throw GraphError("edges not sorted by (layer, src, dst)");
    }
    prev = &e;
  }
}

namespace {

// Plain union-find; paths are halved on find.
struct DisjointSet {
  std::vector<uint32_t> parent;
  explicit DisjointSet(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

}  // namespace

GraphSummary summarize(const TemporalMultilayerGraph& g) {
  GraphSummary s;
  s.num_nodes = g.num_nodes;
  s.num_layers = g.num_layers;
  s.num_streams = g.num_streams;
  s.total_edges = g.edges.size();
  s.node_layer_count = g.node_layer_count();

  DisjointSet ds(s.node_layer_count);
  std::vector<char> active(g.num_nodes, 0);  // node touches an intra-layer edge anywhere
  for (const auto& e : g.edges) {
    ds.unite(uint32_t(g.nl_index(e.src, e.layer)), uint32_t(g.nl_index(e.dst, e.layer)));
    active[e.src] = 1;
    active[e.dst] = 1;
  }
  // Chains tie consecutive copies of a node together, but only for nodes that
  // appear in some layer; a never-seen node stays as T isolated singletons.
  for (uint32_t n = 0; n < g.num_nodes; ++n) {
    if (!active[n]) continue;
    for (uint32_t t = 0; t + 1 < g.num_layers; ++t)
      ds.unite(uint32_t(g.nl_index(n, t)), uint32_t(g.nl_index(n, t + 1)));
  }

  std::vector<size_t> size(s.node_layer_count, 0);
  size_t best = s.node_layer_count ? 1 : 0;
  for (size_t i = 0; i < s.node_layer_count; ++i) {
    size_t c = ++size[ds.find(uint32_t(i))];
    if (c > best) best = c;
  }
  s.llcc = best;
  s.isolated = s.node_layer_count - best;
  return s;
}

LayerAdjacency layer_adjacency(const TemporalMultilayerGraph& g, uint32_t t, StreamSelector sel) {
  if (t >= g.num_layers) throw GraphError("layer " + std::to_string(t) + " out of range");
  if (sel.index != StreamSelector::kMean &&
      (sel.index < 0 || uint32_t(sel.index) >= std::max(g.num_streams, 1u)))
    throw GraphError("stream selector out of range");
  std::vector<Triplet> trips;
  for (const auto& e : g.edges) {
    if (e.layer != t) continue;
    double w = 1.0;
    if (g.num_streams > 0) {
      if (sel.index == StreamSelector::kMean) {
        w = std::accumulate(e.features.begin(), e.features.end(), 0.0) / g.num_streams;
      } else {
        w = e.features[size_t(sel.index)];
      }
    }
    trips.push_back({e.src, e.dst, w});
    if (!g.directed && e.src != e.dst) trips.push_back({e.dst, e.src, w});
  }
  LayerAdjacency out;
  out.layer = t;
  out.mat = CsrMatrix::from_triplets(g.num_nodes, g.num_nodes, trips);
  return out;
}

uint32_t synth_community(uint32_t node, uint32_t num_nodes, uint32_t communities) {
  // Contiguous blocks, sized as evenly as integer division allows.
  return uint32_t((uint64_t(node) * communities) / num_nodes);
}

namespace {

struct EdgeKey {
  uint32_t src, dst;
  bool operator==(const EdgeKey&) const = default;
};
struct EdgeKeyHash {
  size_t operator()(const EdgeKey& k) const {
    return std::hash<uint64_t>()((uint64_t(k.src) << 32) | k.dst);
  }
};

}  // namespace

TemporalMultilayerGraph synth_graph(const SynthConfig& cfg) {
  if (cfg.num_nodes == 0) throw GraphError("synth: num_nodes must be positive");
  if (cfg.num_layers == 0) throw GraphError("synth: num_layers must be positive");
  if (cfg.communities == 0 || cfg.communities > cfg.num_nodes)
    throw GraphError("synth: communities must be in [1, num_nodes]");
  if (!(cfg.p_out >= 0.0 && cfg.p_out <= cfg.p_in && cfg.p_in <= 1.0))
    throw GraphError("synth: need 0 <= p_out <= p_in <= 1");
  if (!(cfg.rewire >= 0.0 && cfg.rewire <= 1.0))
    throw GraphError("synth: rewire probability must be in [0, 1]");

  const uint32_t N = cfg.num_nodes, T = cfg.num_layers, D = cfg.num_streams;
  const uint32_t K = cfg.communities;

  TemporalMultilayerGraph g;
  g.num_nodes = N;
  g.num_layers = T;
  g.num_streams = D;
  g.directed = true;
  g.node_labels.resize(N);
  for (uint32_t n = 0; n < N; ++n) g.node_labels[n] = int32_t(synth_community(n, N, K));

  // Layer 0: directed SBM over ordered pairs, no self loops.
  Rng topo = substream(cfg.seed, "synth/topology");
  std::vector<EdgeKey> cur;
  std::unordered_set<EdgeKey, EdgeKeyHash> present;
  for (uint32_t u = 0; u < N; ++u) {
    for (uint32_t v = 0; v < N; ++v) {
      if (u == v) continue;
      double p = synth_community(u, N, K) == synth_community(v, N, K) ? cfg.p_in : cfg.p_out;
      if (topo.bernoulli(p)) {
        cur.push_back({u, v});
        present.insert({u, v});
      }
    }
  }

  // Per-stream signal state. Sinusoids get a phase from (src community,
  // stream) so neighbors inside a block carry correlated values; AR(1) keeps
  // one latent value per (community, stream) evolved layer to layer.
  constexpr double kPeriod = 12.0;
  constexpr double kNoiseSigma = 0.02;
  Rng sig = substream(cfg.seed, "synth/signal");
  std::vector<std::vector<double>> ar_state(K, std::vector<double>(D, 0.5));

  auto edge_value = [&](uint32_t t, uint32_t u, uint32_t d) {
    uint32_t c = synth_community(u, N, K);
    SignalKind kind = d < cfg.signals.size() ? cfg.signals[d] : SignalKind::Sinusoid;
    double base;
    if (kind == SignalKind::Sinusoid) {
      double phase = 2.0 * std::numbers::pi * (double(c) / K + 0.13 * d);
      base = 0.5 + 0.35 * std::sin(2.0 * std::numbers::pi * t / kPeriod + phase);
    } else {
      base = ar_state[c][d];
    }
    return std::clamp(base + kNoiseSigma * sig.normal(), 0.0, 1.0);
  };

  for (uint32_t t = 0; t < T; ++t) {
    if (t > 0) {
      // Rewire: each surviving edge keeps its source and redraws its
      // destination with probability `rewire` (redrawing on collisions).
      std::vector<EdgeKey> next;
      next.reserve(cur.size());
      std::unordered_set<EdgeKey, EdgeKeyHash> seen;
      for (auto e : cur) {
        if (topo.bernoulli(cfg.rewire)) {
          for (int attempt = 0; attempt < 64; ++attempt) {
            uint32_t v = uint32_t(topo.uniform_int(N));
            if (v == e.src) continue;
            if (seen.count({e.src, v})) continue;
            e.dst = v;
            break;
          }
        }
        if (seen.insert(e).second) next.push_back(e);
      }
      cur = std::move(next);
      for (uint32_t c = 0; c < K; ++c)
        for (uint32_t d = 0; d < D; ++d)
          ar_state[c][d] = std::clamp(0.5 + 0.8 * (ar_state[c][d] - 0.5) + 0.05 * sig.normal(), 0.0, 1.0);
    }
    std::sort(cur.begin(), cur.end(), [](const EdgeKey& a, const EdgeKey& b) {
      return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    for (const auto& e : cur) {
      TemporalEdge te;
      te.layer = t;
      te.src = e.src;
      te.dst = e.dst;
      te.features.resize(D);
      for (uint32_t d = 0; d < D; ++d) te.features[d] = edge_value(t, e.src, d);
      g.edges.push_back(std::move(te));
    }
  }
  g.validate();
  return g;
}

TemporalMultilayerGraph downsample(const TemporalMultilayerGraph& g, uint32_t k) {
  if (k == 0) throw GraphError("downsample: step must be positive");
  if (k == 1) return g;
  TemporalMultilayerGraph out;
  out.num_nodes = g.num_nodes;
  out.num_streams = g.num_streams;
  out.sampling_interval = g.sampling_interval;  // dense relabel keeps steps adjacent
  out.directed = g.directed;
  out.node_labels = g.node_labels;
  out.num_layers = (g.num_layers + k - 1) / k;
  for (const auto& e : g.edges) {
    if (e.layer % k != 0) continue;
    TemporalEdge te = e;
    te.layer = e.layer / k;
    out.edges.push_back(std::move(te));
  }
  out.validate();
  return out;
}

}  // namespace tmpgnn
