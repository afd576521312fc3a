// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tmpgnn/csr.hpp"
#include "tmpgnn/graph.hpp"

namespace tmpgnn {

// Unweighted undirected skeleton of the supra-graph: intra-layer edges made
// symmetric, plus chain edges linking each node's copies at spacing delta.
// Entry values are structural only (1 per link); hop counts ignore weights.
CsrMatrix supra_skeleton(const TemporalMultilayerGraph& g, uint32_t delta = 1,
                         bool interlayer = true);

// Per-layer skeleton of one layer's edges alone (N x N), for multigraph mode.
CsrMatrix layer_skeleton(const TemporalMultilayerGraph& g, uint32_t t);

// All balls of radius q: for each source, the nodes within q hops and their
// hop counts. Pairs beyond q are absent (treated as +inf by callers).
struct TruncatedDistanceMap {
  uint32_t q = 0;
  size_t num_nodes = 0;
  std::vector<size_t> offsets;    // per source, size num_nodes + 1
  std::vector<uint32_t> node;     // ball members, sorted by id within a source
  std::vector<uint8_t> hops;      // parallel to node

  // Hop count u -> v, or -1 when farther than q.
  int distance(uint32_t u, uint32_t v) const;
  size_t ball_size(uint32_t u) const { return offsets[u + 1] - offsets[u]; }
};

TruncatedDistanceMap truncated_distances_serial(const CsrMatrix& adj, uint32_t q);
TruncatedDistanceMap truncated_distances_parallel(const CsrMatrix& adj, uint32_t q);
// Picks the parallel path for enough sources/threads; results are identical.
TruncatedDistanceMap truncated_distances(const CsrMatrix& adj, uint32_t q);

}  // namespace tmpgnn
