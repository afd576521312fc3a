// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tmpgnn/supra.hpp"

namespace tmpgnn {

struct SpectralError : std::runtime_error {
  std::vector<double> last_iterate;  // where the iteration stood when it gave up
  explicit SpectralError(const std::string& msg, std::vector<double> it = {})
      : std::runtime_error(msg), last_iterate(std::move(it)) {}
};

struct PowerIterOptions {
  double tol = 1e-8;
  int max_iter = 200000;
  // Uniform rank-one bump eps*ones*ones^T keeps reducible matrices from
  // stalling without a dominant direction; small enough to sit far below tol.
  double reducibility_eps = 1e-12;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm, sign-fixed so the entry sum is positive
  int iterations = 0;
  double residual = 0.0;  // ||M v - value * v|| at exit
};

// Dominant eigenpair of a nonnegative square matrix, all-ones start.
// Runs on M + shift*I internally (shift = half the max row sum) so bipartite
// spectra with a +/- lambda pair still settle; the reported value is
// unshifted. Converges when the Rayleigh quotient moves less than tol and the
// residual drops below 10*tol.
EigenPair power_iteration(const CsrMatrix& M, const PowerIterOptions& opts = {});

struct OmegaSearchOptions {
  double tol = 1e-3;       // relative gap |lambda - omega*mu1| / (omega*mu1)
  double start = 10.0;
  double growth = 2.0;
  double cap = 1e6;
  PowerIterOptions power;
};

struct OmegaSelection {
  double omega = 0.0;
  double lambda_max = 0.0;
  double mu1 = 0.0;      // dominant eigenvalue of the coupling matrix
  double rel_gap = 0.0;  // achieved at the selected omega
  int steps = 0;         // ladder rungs tested
};

// Grow omega from `start` by `growth` until lambda_max(C(omega)) approaches
// omega * mu1 within the relative tolerance. Throws when the cap is hit,
// reporting the best gap reached.
OmegaSelection select_omega(const TemporalMultilayerGraph& g, const InterLayerCoupling& coupling,
                            const OmegaSearchOptions& opts = {},
                            StreamSelector sel = StreamSelector::stream(0));

struct CentralitySummary {
  uint32_t num_nodes = 0;
  uint32_t num_layers = 0;
  double omega = 0.0;
  double lambda_max = 0.0;
  std::vector<double> joint;        // W(v,t) at index v + N*t, nonnegative
  std::vector<double> mlc;          // per layer, sum of joint over nodes
  std::vector<double> conditional;  // CC(v,t) = W/MLC; 0 where the layer is degenerate
  std::vector<uint32_t> degenerate_layers;  // layers with zero centrality mass

  double joint_at(uint32_t v, uint32_t t) const { return joint[size_t(v) + size_t(num_nodes) * t]; }
  double cc_at(uint32_t v, uint32_t t) const {
    return conditional[size_t(v) + size_t(num_nodes) * t];
  }
};

CentralitySummary centralities(const SupraMatrix& supra, const PowerIterOptions& opts = {});

// Per-node mean of CC(v,t) over layers at an automatically selected large
// omega; the stationary profile the coupling drives everything toward.
struct StationaryCc {
  OmegaSelection selection;
  CentralitySummary summary;
  std::vector<double> cc;  // one entry per node
};

StationaryCc stationary_cc(const TemporalMultilayerGraph& g, const InterLayerCoupling& coupling,
                           const OmegaSearchOptions& opts = {},
                           StreamSelector sel = StreamSelector::stream(0));

}  // namespace tmpgnn
