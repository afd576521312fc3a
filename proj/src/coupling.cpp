// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/coupling.hpp"

#include <stdexcept>

namespace tmpgnn {

InterLayerCoupling interlayer_matrix(uint32_t T, uint32_t delta, CouplingMode mode, double gamma) {
  if (T < 2) throw std::invalid_argument("interlayer_matrix: need at least 2 layers");
  if (delta == 0) throw std::invalid_argument("interlayer_matrix: delta must be positive");
  if (mode == CouplingMode::Teleport && gamma < 0.0)
    throw std::invalid_argument("interlayer_matrix: teleport needs gamma >= 0");

  InterLayerCoupling c;
  c.mode = mode;
  c.num_layers = T;
  c.delta = delta;
  c.gamma = mode == CouplingMode::Teleport ? gamma : 0.0;
  c.weights.assign(size_t(T) * T, 0.0);
  for (uint32_t t = 0; t < T; ++t) {
    for (uint32_t tp = 0; tp < T; ++tp) {
      uint32_t gap = t > tp ? t - tp : tp - t;
      double w = gap == delta ? 1.0 : 0.0;
      if (mode == CouplingMode::Teleport) w += gamma;
      c.weights[size_t(t) * T + tp] = w;
    }
  }
  return c;
}

}  // namespace tmpgnn
