// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tmpgnn/tensor.hpp"

namespace tmpgnn {

// Named trainable leaves, in creation order. The order is part of a model's
// determinism contract: same construction sequence, same RNG draws.
struct ParamStore {
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  // Weight matrix with uniform(-1/sqrt(rows), +1/sqrt(rows)) entries; rows is
  // the fan-in under the x*W convention used everywhere here.
  Tensor create(const std::string& name, size_t rows, size_t cols, Rng& rng);
  Tensor create_zeros(const std::string& name, size_t rows, size_t cols);
  Tensor* find(const std::string& name);
  void zero_grad();
  size_t count() const { return tensors.size(); }
};

// Full value copy of every parameter, for best-checkpoint bookkeeping.
std::vector<std::vector<double>> snapshot(const ParamStore& store);
void restore(ParamStore& store, const std::vector<std::vector<double>>& snap);

struct GruParams {
  size_t input_dim = 0, hidden_dim = 0;
  Tensor Wz, Uz, bz;  // update gate
  Tensor Wr, Ur, br;  // reset gate
  Tensor Wh, Uh, bh;  // candidate
};

GruParams make_gru(ParamStore& store, const std::string& prefix, size_t input_dim,
                   size_t hidden_dim, Rng& rng);

// z = sig(xWz + hUz + bz); r = sig(xWr + hUr + br);
// htilde = tanh(xWh + (r . h)Uh + bh); h' = (1-z) . h + z . htilde
Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruParams& p);

// Unrolled left-to-right pass, zero initial state; one hidden per step.
std::vector<Tensor> gru_sequence(const std::vector<Tensor>& xs, const GruParams& p);

// Per-step concat of the forward pass and the reversed backward pass.
std::vector<Tensor> bigru(const std::vector<Tensor>& xs, const GruParams& fwd,
                          const GruParams& bwd);

struct AdamOptions {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  explicit Adam(ParamStore& store, AdamOptions opts = {});
  // Applies one update from current grads. Throws naming the offending
  // parameter when a gradient is not finite.
  void step();
  int64_t steps_taken() const { return t_; }

 private:
  ParamStore* store_;
  AdamOptions o_;
  int64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace tmpgnn
