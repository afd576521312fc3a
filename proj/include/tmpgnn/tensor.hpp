// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tmpgnn/rng.hpp"

namespace tmpgnn {

// Reverse-mode autodiff over dense row-major float64 matrices. Every tensor
// is 2-D (rows x cols); scalars are 1x1. Ops build a DAG of shared nodes;
// backward() walks it once in reverse topological order. Graphs are cheap and
// rebuilt every step, so nothing here tries to be clever about reuse.
struct TensorNode {
  size_t rows = 0, cols = 0;
  std::vector<double> value;
  std::vector<double> grad;  // sized on demand, only when needs_grad
  bool needs_grad = false;
  bool leaf = true;  // leaves keep grads across backward calls
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;  // pushes self.grad into parents

  size_t size() const { return rows * cols; }
  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(size_t rows, size_t cols);
  static Tensor full(size_t rows, size_t cols, double x);
  static Tensor from(size_t rows, size_t cols, std::vector<double> v);
  static Tensor scalar(double x) { return full(1, 1, x); }

  bool defined() const { return n_ != nullptr; }
  size_t rows() const { return n_->rows; }
  size_t cols() const { return n_->cols; }
  size_t size() const { return n_->size(); }
  std::vector<double>& value() { return n_->value; }
  const std::vector<double>& value() const { return n_->value; }
  const std::vector<double>& grad() const { return n_->grad; }
  bool requires_grad() const { return n_->needs_grad; }
  double item() const;

  // Marks a leaf as trainable; must be set before the tensor is used in ops.
  Tensor& set_requires_grad(bool on = true);
  void zero_grad();

  // Backpropagate from a 1x1 tensor. Leaf gradients accumulate across calls;
  // interior gradients are transient.
  void backward() const;

  std::shared_ptr<TensorNode> node() const { return n_; }
  explicit Tensor(std::shared_ptr<TensorNode> n) : n_(std::move(n)) {}

 private:
  std::shared_ptr<TensorNode> n_;
};

// ---- elementwise ----
Tensor add(const Tensor& a, const Tensor& b);        // same shape
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);        // Hadamard
Tensor add_rowvec(const Tensor& a, const Tensor& b); // b is 1 x C, broadcast over rows
Tensor affine(const Tensor& a, double alpha, double beta);  // alpha*a + beta
Tensor mul_scalar(const Tensor& a, const Tensor& s);        // s is 1x1, trainable
Tensor mul_rowvec(const Tensor& a, const Tensor& b); // b is 1 x C, broadcast over rows
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor relu(const Tensor& a);

// ---- linear algebra ----
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor rowsum(const Tensor& a);   // R x C -> R x 1
Tensor sum_all(const Tensor& a);  // -> 1 x 1
Tensor mean_all(const Tensor& a);
Tensor dot(const Tensor& a, const Tensor& b);  // flattened, shapes equal

// ---- shape and indexing ----
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor gather_rows(const Tensor& a, std::vector<uint32_t> idx);
// out[dst[r], :] += a[r, :]; out has out_rows rows.
Tensor scatter_sum(const Tensor& a, std::vector<uint32_t> dst, size_t out_rows);
// Sparse fill of an R x C grid from a column of values at (row, col) slots.
Tensor scatter_pairs(const Tensor& vals, std::vector<uint32_t> row_idx,
                     std::vector<uint32_t> col_idx, size_t out_rows, size_t out_cols);
Tensor scale_rows(const Tensor& a, std::vector<double> w);  // w constant, one per row

// ---- softmax ----
Tensor softmax_rows(const Tensor& a);
// Column vector grouped into contiguous segments by offsets (K+1 entries);
// softmax normalizes within each segment.
Tensor segment_softmax(const Tensor& scores, std::vector<size_t> offsets);
// out[k, :] = sum over segment k of w[p] * values[p, :], w differentiable.
Tensor segment_weighted_sum(const Tensor& values, const Tensor& w, std::vector<size_t> offsets);

// ---- losses (fused for numerical stability) ----
Tensor bce_logits(const Tensor& logits, std::vector<double> labels);  // mean over rows
// Mean squared error over cells where mask is 1.
Tensor masked_mse(const Tensor& pred, std::vector<double> target, std::vector<double> mask);

// Plain evaluation helper, no graph involved.
double masked_mae(const std::vector<double>& pred, const std::vector<double>& target,
                  const std::vector<double>& mask);

// ---- dense kernels (serial + OpenMP pair, bench-comparable) ----
void matmul_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);
void matmul_parallel(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);

}  // namespace tmpgnn
