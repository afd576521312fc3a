// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace tmpgnn {

enum class CouplingMode { Chain, Teleport };

// T x T inter-layer weight matrix A~. Chain places 1 exactly where
// |t'-t| = delta; teleport adds gamma to every entry of the chain matrix,
// diagonal included.
struct InterLayerCoupling {
  CouplingMode mode = CouplingMode::Chain;
  uint32_t num_layers = 0;
  uint32_t delta = 1;
  double gamma = 0.0;
  std::vector<double> weights;  // row-major T*T

  double at(uint32_t t, uint32_t tp) const { return weights[size_t(t) * num_layers + tp]; }
};

InterLayerCoupling interlayer_matrix(uint32_t T, uint32_t delta, CouplingMode mode,
                                     double gamma = 0.0);

}  // namespace tmpgnn
