// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tmpgnn/coupling.hpp"
#include "tmpgnn/csr.hpp"
#include "tmpgnn/graph.hpp"

namespace tmpgnn {

// NT x NT sparse matrix Diag[C^(1)..C^(T)] + omega * (A~ kron I), where the
// per-layer centrality matrix C^(t) is the layer adjacency itself. Node n at
// layer t occupies linear index n + N*t.
struct SupraMatrix {
  uint32_t num_nodes = 0;
  uint32_t num_layers = 0;
  double omega = 0.0;
  CsrMatrix mat;

  size_t dim() const { return size_t(num_nodes) * num_layers; }
};

SupraMatrix build_supracentrality(const TemporalMultilayerGraph& g, double omega,
                                  const InterLayerCoupling& coupling,
                                  StreamSelector sel = StreamSelector::stream(0));

// omega * (A~ kron I) alone, i.e. the coupling part of the supra matrix.
CsrMatrix coupling_kron_identity(uint32_t num_nodes, const InterLayerCoupling& coupling,
                                 double omega = 1.0);

}  // namespace tmpgnn
