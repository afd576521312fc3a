// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/supra.hpp"

#include <stdexcept>

namespace tmpgnn {

CsrMatrix coupling_kron_identity(uint32_t num_nodes, const InterLayerCoupling& coupling,
                                 double omega) {
  const uint32_t N = num_nodes, T = coupling.num_layers;
  std::vector<Triplet> trips;
  for (uint32_t t = 0; t < T; ++t) {
    for (uint32_t tp = 0; tp < T; ++tp) {
      double w = coupling.at(t, tp);
      if (w == 0.0) continue;
      for (uint32_t n = 0; n < N; ++n)
        trips.push_back({n + N * t, n + N * tp, omega * w});
    }
  }
  size_t nt = size_t(N) * T;
  return CsrMatrix::from_triplets(nt, nt, trips);
}

SupraMatrix build_supracentrality(const TemporalMultilayerGraph& g, double omega,
                                  const InterLayerCoupling& coupling, StreamSelector sel) {
  if (omega < 0.0) throw std::invalid_argument("build_supracentrality: omega must be >= 0");
  if (coupling.num_layers != g.num_layers)
    throw std::invalid_argument("build_supracentrality: coupling layer count mismatch");

  const uint32_t N = g.num_nodes, T = g.num_layers;
  std::vector<Triplet> trips;
  for (uint32_t t = 0; t < T; ++t) {
    auto adj = layer_adjacency(g, t, sel);
    const auto& m = adj.mat;
    for (uint32_t r = 0; r < m.rows; ++r)
      for (size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
        trips.push_back({r + N * t, m.col[k] + N * t, m.val[k]});
  }
  if (omega > 0.0) {
    for (uint32_t t = 0; t < T; ++t) {
      for (uint32_t tp = 0; tp < T; ++tp) {
        double w = coupling.at(t, tp);
        if (w == 0.0) continue;
        for (uint32_t n = 0; n < N; ++n)
          trips.push_back({n + N * t, n + N * tp, omega * w});
      }
    }
  }

  SupraMatrix s;
  s.num_nodes = N;
  s.num_layers = T;
  s.omega = omega;
  size_t nt = size_t(N) * T;
  s.mat = CsrMatrix::from_triplets(nt, nt, trips);
  return s;
}

}  // namespace tmpgnn
