// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace tmpgnn {

Tensor ParamStore::create(const std::string& name, size_t rows, size_t cols, Rng& rng) {
  double bound = 1.0 / std::sqrt(double(rows));
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(-bound, bound);
  Tensor t = Tensor::from(rows, cols, std::move(v));
  t.set_requires_grad();
  names.push_back(name);
  tensors.push_back(t);
  return t;
}

Tensor ParamStore::create_zeros(const std::string& name, size_t rows, size_t cols) {
  Tensor t = Tensor::zeros(rows, cols);
  t.set_requires_grad();
  names.push_back(name);
  tensors.push_back(t);
  return t;
}

Tensor* ParamStore::find(const std::string& name) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return &tensors[i];
  return nullptr;
}

void ParamStore::zero_grad() {
  for (auto& t : tensors) t.zero_grad();
}

std::vector<std::vector<double>> snapshot(const ParamStore& store) {
  std::vector<std::vector<double>> snap;
  snap.reserve(store.tensors.size());
  for (const auto& t : store.tensors) snap.push_back(t.value());
  return snap;
}

void restore(ParamStore& store, const std::vector<std::vector<double>>& snap) {
  if (snap.size() != store.tensors.size())
    throw std::invalid_argument("restore: snapshot has wrong parameter count");
  for (size_t i = 0; i < snap.size(); ++i) {
    if (snap[i].size() != store.tensors[i].size())
      throw std::invalid_argument("restore: shape mismatch for " + store.names[i]);
    store.tensors[i].value() = snap[i];
  }
}

GruParams make_gru(ParamStore& store, const std::string& prefix, size_t input_dim,
                   size_t hidden_dim, Rng& rng) {
  GruParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.Wz = store.create(prefix + ".Wz", input_dim, hidden_dim, rng);
  p.Uz = store.create(prefix + ".Uz", hidden_dim, hidden_dim, rng);
  p.bz = store.create_zeros(prefix + ".bz", 1, hidden_dim);
  p.Wr = store.create(prefix + ".Wr", input_dim, hidden_dim, rng);
  p.Ur = store.create(prefix + ".Ur", hidden_dim, hidden_dim, rng);
  p.br = store.create_zeros(prefix + ".br", 1, hidden_dim);
  p.Wh = store.create(prefix + ".Wh", input_dim, hidden_dim, rng);
  p.Uh = store.create(prefix + ".Uh", hidden_dim, hidden_dim, rng);
  p.bh = store.create_zeros(prefix + ".bh", 1, hidden_dim);
  return p;
}

Tensor gru_cell(const Tensor& x, const Tensor& h_prev, const GruParams& p) {
  if (x.cols() != p.input_dim || h_prev.cols() != p.hidden_dim || x.rows() != h_prev.rows())
    throw std::invalid_argument("gru_cell: dimension mismatch");
  Tensor z = sigmoid(add_rowvec(add(matmul(x, p.Wz), matmul(h_prev, p.Uz)), p.bz));
  Tensor r = sigmoid(add_rowvec(add(matmul(x, p.Wr), matmul(h_prev, p.Ur)), p.br));
  Tensor htilde = tanh(add_rowvec(add(matmul(x, p.Wh), matmul(mul(r, h_prev), p.Uh)), p.bh));
  return add(mul(affine(z, -1.0, 1.0), h_prev), mul(z, htilde));
}

std::vector<Tensor> gru_sequence(const std::vector<Tensor>& xs, const GruParams& p) {
  if (xs.empty()) throw std::invalid_argument("gru_sequence: empty sequence");
  std::vector<Tensor> hs;
  hs.reserve(xs.size());
  Tensor h = Tensor::zeros(xs[0].rows(), p.hidden_dim);
  for (const auto& x : xs) {
    h = gru_cell(x, h, p);
    hs.push_back(h);
  }
  return hs;
}

std::vector<Tensor> bigru(const std::vector<Tensor>& xs, const GruParams& fwd,
                          const GruParams& bwd) {
  if (xs.empty()) throw std::invalid_argument("bigru: empty sequence");
  std::vector<Tensor> forward = gru_sequence(xs, fwd);
  std::vector<Tensor> reversed(xs.rbegin(), xs.rend());
  std::vector<Tensor> backward = gru_sequence(reversed, bwd);
  std::vector<Tensor> out;
  out.reserve(xs.size());
  for (size_t t = 0; t < xs.size(); ++t)
    out.push_back(concat_cols({forward[t], backward[xs.size() - 1 - t]}));
  return out;
}

Adam::Adam(ParamStore& store, AdamOptions opts) : store_(&store), o_(opts) {
  m_.resize(store.tensors.size());
  v_.resize(store.tensors.size());
  for (size_t i = 0; i < store.tensors.size(); ++i) {
    m_[i].assign(store.tensors[i].size(), 0.0);
    v_[i].assign(store.tensors[i].size(), 0.0);
  }
}

void Adam::step() {
  if (m_.size() != store_->tensors.size())
    throw std::runtime_error("Adam: parameter store changed size after construction");
  ++t_;
  double bc1 = 1.0 - std::pow(o_.beta1, double(t_));
  double bc2 = 1.0 - std::pow(o_.beta2, double(t_));
  for (size_t i = 0; i < store_->tensors.size(); ++i) {
    Tensor& p = store_->tensors[i];
    const auto& g = p.grad();
    if (g.size() != p.size())
      throw std::runtime_error("Adam: missing gradient for " + store_->names[i]);
    auto& val = p.value();
    for (size_t j = 0; j < g.size(); ++j) {
      if (!std::isfinite(g[j]))
        throw std::runtime_error("Adam: non-finite gradient in " + store_->names[i]);
      m_[i][j] = o_.beta1 * m_[i][j] + (1.0 - o_.beta1) * g[j];
      v_[i][j] = o_.beta2 * v_[i][j] + (1.0 - o_.beta2) * g[j] * g[j];
      double mhat = m_[i][j] / bc1;
      double vhat = v_[i][j] / bc2;
      val[j] -= o_.lr * mhat / (std::sqrt(vhat) + o_.eps);
    }
  }
}

}  // namespace tmpgnn
