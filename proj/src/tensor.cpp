// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "tmpgnn/threading.hpp"

namespace tmpgnn {

namespace {

std::shared_ptr<TensorNode> make_node(size_t rows, size_t cols) {
  auto n = std::make_shared<TensorNode>();
  n->rows = rows;
  n->cols = cols;
  n->value.assign(rows * cols, 0.0);
  return n;
}

// Result node inheriting needs_grad from its parents.
Tensor make_op(size_t rows, size_t cols, std::vector<std::shared_ptr<TensorNode>> parents,
               std::function<void(TensorNode&)> backprop) {
  auto n = make_node(rows, cols);
  n->leaf = false;
  for (const auto& p : parents) n->needs_grad = n->needs_grad || p->needs_grad;
  if (n->needs_grad) {
    n->parents = std::move(parents);
    n->backprop = std::move(backprop);
  }
  return Tensor(n);
}

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Tensor Tensor::zeros(size_t rows, size_t cols) { return Tensor(make_node(rows, cols)); }

Tensor Tensor::full(size_t rows, size_t cols, double x) {
  auto n = make_node(rows, cols);
  std::fill(n->value.begin(), n->value.end(), x);
  return Tensor(n);
}

Tensor Tensor::from(size_t rows, size_t cols, std::vector<double> v) {
  check(v.size() == rows * cols, "Tensor::from: size mismatch");
  auto n = make_node(rows, cols);
  n->value = std::move(v);
  return Tensor(n);
}

double Tensor::item() const {
  check(n_ && n_->size() == 1, "item: tensor is not 1x1");
  return n_->value[0];
}

Tensor& Tensor::set_requires_grad(bool on) {
  check(n_->leaf, "set_requires_grad: only leaves");
  n_->needs_grad = on;
  if (on) n_->ensure_grad();
  return *this;
}

void Tensor::zero_grad() {
  if (n_->needs_grad) n_->grad.assign(n_->value.size(), 0.0);
}

void Tensor::backward() const {
  check(n_ && n_->size() == 1, "backward: loss must be 1x1");
  if (!n_->needs_grad) return;  // nothing trainable below

  // Post-order DFS, then walk the order backwards.
  std::vector<TensorNode*> order;
  std::unordered_set<TensorNode*> seen;
  std::vector<std::pair<TensorNode*, size_t>> stack{{n_.get(), 0}};
  seen.insert(n_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      TensorNode* p = node->parents[next++].get();
      if (p->needs_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  // Interior gradients are scratch; leaves accumulate across calls.
  for (TensorNode* n : order) {
    if (n->leaf)
      n->ensure_grad();
    else
      n->grad.assign(n->value.size(), 0.0);
  }
  n_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backprop) (*it)->backprop(**it);
}

// ---- elementwise ----

Tensor add(const Tensor& a, const Tensor& b) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_op(a.rows(), a.cols(), {pa, pb}, [pa, pb](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
    if (pb->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] += self.grad[i];
  });
  for (size_t i = 0; i < out.size(); ++i) out.value()[i] = pa->value[i] + pb->value[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), "sub: shape mismatch");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_op(a.rows(), a.cols(), {pa, pb}, [pa, pb](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
    if (pb->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] -= self.grad[i];
  });
  for (size_t i = 0; i < out.size(); ++i) out.value()[i] = pa->value[i] - pb->value[i];
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check(a.rows() == b.rows() && a.cols() == b.cols(), "mul: shape mismatch");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_op(a.rows(), a.cols(), {pa, pb}, [pa, pb](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i] * pb->value[i];
    if (pb->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] += self.grad[i] * pa->value[i];
  });
  for (size_t i = 0; i < out.size(); ++i) out.value()[i] = pa->value[i] * pb->value[i];
  return out;
}

Tensor add_rowvec(const Tensor& a, const Tensor& b) {
  check(b.rows() == 1 && b.cols() == a.cols(), "add_rowvec: need 1 x C bias");
  auto pa = a.node(), pb = b.node();
  const size_t C = a.cols();
  Tensor out = make_op(a.rows(), C, {pa, pb}, [pa, pb, C](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
    if (pb->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i % C] += self.grad[i];
  });
  for (size_t r = 0; r < a.rows(); ++r)
    for (size_t c = 0; c < C; ++c) out.value()[r * C + c] = pa->value[r * C + c] + pb->value[c];
  return out;
}

Tensor mul_rowvec(const Tensor& a, const Tensor& b) {
  check(b.rows() == 1 && b.cols() == a.cols(), "mul_rowvec: need 1 x C vector");
  auto pa = a.node(), pb = b.node();
  const size_t C = a.cols();
  Tensor out = make_op(a.rows(), C, {pa, pb}, [pa, pb, C](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i)
        pa->grad[i] += self.grad[i] * pb->value[i % C];
    if (pb->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i)
        pb->grad[i % C] += self.grad[i] * pa->value[i];
  });
  for (size_t r = 0; r < a.rows(); ++r)
    for (size_t c = 0; c < C; ++c) out.value()[r * C + c] = pa->value[r * C + c] * pb->value[c];
  return out;
}

Tensor affine(const Tensor& a, double alpha, double beta) {
  auto pa = a.node();
  Tensor out = make_op(a.rows(), a.cols(), {pa}, [pa, alpha](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += alpha * self.grad[i];
  });
  for (size_t i = 0; i < out.size(); ++i) out.value()[i] = alpha * pa->value[i] + beta;
  return out;
}

Tensor mul_scalar(const Tensor& a, const Tensor& s) {
  check(s.size() == 1, "mul_scalar: scale must be 1x1");
  auto pa = a.node(), ps = s.node();
  Tensor out = make_op(a.rows(), a.cols(), {pa, ps}, [pa, ps](TensorNode& self) {
    if (pa->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i] * ps->value[0];
    if (ps->needs_grad)
      for (size_t i = 0; i < self.grad.size(); ++i) ps->grad[0] += self.grad[i] * pa->value[i];
  });
  for (size_t i = 0; i < out.size(); ++i) out.value()[i] = pa->value[i] * ps->value[0];
  return out;
}

namespace {

template <class Fwd, class Dfn>
Tensor unary(const Tensor& a, Fwd fwd, Dfn dval) {
  auto pa = a.node();
  Tensor out = make_op(a.rows(), a.cols(), {pa}, [pa, dval](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t i = 0; i < self.grad.size(); ++i)
      pa->grad[i] += self.grad[i] * dval(self.value[i], pa->value[i]);
  });
  for (size_t i = 0; i < out.size(); ++i) out.value()[i] = fwd(pa->value[i]);
  return out;
}

}  // namespace

Tensor tanh(const Tensor& a) {
  return unary(a, [](double x) { return std::tanh(x); },
               [](double y, double) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
               [](double y, double) { return y * (1.0 - y); });
}

Tensor relu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double, double x) { return x > 0.0 ? 1.0 : 0.0; });
}

// ---- linear algebra ----

void matmul_serial(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
  std::fill(c, c + m * n, 0.0);
  for (size_t i = 0; i < m; ++i)
    for (size_t p = 0; p < k; ++p) {
      double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * n;
      double* crow = c + i * n;
      for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
}

void matmul_parallel(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int64_t i = 0; i < int64_t(m); ++i) {
    double* crow = c + size_t(i) * n;
    std::fill(crow, crow + n, 0.0);
    for (size_t p = 0; p < k; ++p) {
      double aip = a[size_t(i) * k + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * n;
      for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

namespace {

// Row-parallel either way, so both paths produce identical bits.
void matmul_dispatch(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
  if (m * k * n >= (size_t(1) << 18) && m >= 64 && max_threads() > 1)
    matmul_parallel(a, b, c, m, k, n);
  else
    matmul_serial(a, b, c, m, k, n);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  check(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  auto pa = a.node(), pb = b.node();
  const size_t M = a.rows(), K = a.cols(), N = b.cols();
  Tensor out = make_op(M, N, {pa, pb}, [pa, pb, M, K, N](TensorNode& self) {
    if (pa->needs_grad) {  // dA += dC * B^T
      for (size_t i = 0; i < M; ++i)
        for (size_t p = 0; p < K; ++p) {
          double acc = 0.0;
          const double* grow = self.grad.data() + i * N;
          const double* brow = pb->value.data() + p * N;
          for (size_t j = 0; j < N; ++j) acc += grow[j] * brow[j];
          pa->grad[i * K + p] += acc;
        }
    }
    if (pb->needs_grad) {  // dB += A^T * dC
      for (size_t i = 0; i < M; ++i) {
        const double* grow = self.grad.data() + i * N;
        for (size_t p = 0; p < K; ++p) {
          double aip = pa->value[i * K + p];
          if (aip == 0.0) continue;
          double* brow = pb->grad.data() + p * N;
          for (size_t j = 0; j < N; ++j) brow[j] += aip * grow[j];
        }
      }
    }
  });
  matmul_dispatch(pa->value.data(), pb->value.data(), out.value().data(), M, K, N);
  return out;
}

Tensor rowsum(const Tensor& a) {
  auto pa = a.node();
  const size_t R = a.rows(), C = a.cols();
  Tensor out = make_op(R, 1, {pa}, [pa, R, C](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t r = 0; r < R; ++r)
      for (size_t c = 0; c < C; ++c) pa->grad[r * C + c] += self.grad[r];
  });
  for (size_t r = 0; r < R; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c < C; ++c) acc += pa->value[r * C + c];
    out.value()[r] = acc;
  }
  return out;
}

Tensor sum_all(const Tensor& a) {
  auto pa = a.node();
  Tensor out = make_op(1, 1, {pa}, [pa](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (double& g : pa->grad) g += self.grad[0];
  });
  double acc = 0.0;
  for (double v : pa->value) acc += v;
  out.value()[0] = acc;
  return out;
}

Tensor mean_all(const Tensor& a) {
  check(a.size() > 0, "mean_all: empty tensor");
  return affine(sum_all(a), 1.0 / double(a.size()), 0.0);
}

Tensor dot(const Tensor& a, const Tensor& b) {
  check(a.size() == b.size(), "dot: size mismatch");
  return sum_all(mul(a, b));
}

// ---- shape and indexing ----

Tensor concat_cols(const std::vector<Tensor>& parts) {
  check(!parts.empty(), "concat_cols: no parts");
  const size_t R = parts[0].rows();
  size_t C = 0;
  std::vector<std::shared_ptr<TensorNode>> ps;
  for (const auto& p : parts) {
    check(p.rows() == R, "concat_cols: row mismatch");
    C += p.cols();
    ps.push_back(p.node());
  }
  auto parents = ps;
  Tensor out = make_op(R, C, std::move(parents), [ps, R, C](TensorNode& self) {
    size_t base = 0;
    for (const auto& p : ps) {
      if (p->needs_grad) {
        for (size_t r = 0; r < R; ++r)
          for (size_t c = 0; c < p->cols; ++c)
            p->grad[r * p->cols + c] += self.grad[r * C + base + c];
      }
      base += p->cols;
    }
  });
  size_t base = 0;
  for (const auto& p : ps) {
    for (size_t r = 0; r < R; ++r)
      for (size_t c = 0; c < p->cols; ++c)
        out.value()[r * C + base + c] = p->value[r * p->cols + c];
    base += p->cols;
  }
  return out;
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  check(!parts.empty(), "concat_rows: no parts");
  const size_t C = parts[0].cols();
  size_t R = 0;
  std::vector<std::shared_ptr<TensorNode>> ps;
  for (const auto& p : parts) {
    check(p.cols() == C, "concat_rows: column mismatch");
    R += p.rows();
    ps.push_back(p.node());
  }
  auto parents = ps;
  Tensor out = make_op(R, C, std::move(parents), [ps, C](TensorNode& self) {
    size_t base = 0;
    for (const auto& p : ps) {
      if (p->needs_grad)
        for (size_t i = 0; i < p->value.size(); ++i) p->grad[i] += self.grad[base + i];
      base += p->value.size();
    }
  });
  size_t base = 0;
  for (const auto& p : ps) {
    std::copy(p->value.begin(), p->value.end(), out.value().begin() + std::ptrdiff_t(base));
    base += p->value.size();
  }
  return out;
}

Tensor gather_rows(const Tensor& a, std::vector<uint32_t> idx) {
  auto pa = a.node();
  const size_t C = a.cols(), R = idx.size();
  for (uint32_t i : idx) check(i < a.rows(), "gather_rows: index out of range");
  auto ids = std::make_shared<std::vector<uint32_t>>(std::move(idx));
  Tensor out = make_op(R, C, {pa}, [pa, ids, C](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t r = 0; r < ids->size(); ++r) {
      double* dst = pa->grad.data() + size_t((*ids)[r]) * C;
      const double* src = self.grad.data() + r * C;
      for (size_t c = 0; c < C; ++c) dst[c] += src[c];
    }
  });
  for (size_t r = 0; r < R; ++r) {
    const double* src = pa->value.data() + size_t((*ids)[r]) * C;
    double* dst = out.value().data() + r * C;
    std::copy(src, src + C, dst);
  }
  return out;
}

Tensor scatter_sum(const Tensor& a, std::vector<uint32_t> dst, size_t out_rows) {
  check(dst.size() == a.rows(), "scatter_sum: one destination per row");
  for (uint32_t i : dst) check(i < out_rows, "scatter_sum: destination out of range");
  auto pa = a.node();
  const size_t C = a.cols();
  auto ids = std::make_shared<std::vector<uint32_t>>(std::move(dst));
  Tensor out = make_op(out_rows, C, {pa}, [pa, ids, C](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t r = 0; r < ids->size(); ++r) {
      const double* src = self.grad.data() + size_t((*ids)[r]) * C;
      double* g = pa->grad.data() + r * C;
      for (size_t c = 0; c < C; ++c) g[c] += src[c];
    }
  });
  for (size_t r = 0; r < ids->size(); ++r) {
    const double* src = pa->value.data() + r * C;
    double* o = out.value().data() + size_t((*ids)[r]) * C;
    for (size_t c = 0; c < C; ++c) o[c] += src[c];
  }
  return out;
}

Tensor scatter_pairs(const Tensor& vals, std::vector<uint32_t> row_idx,
                     std::vector<uint32_t> col_idx, size_t out_rows, size_t out_cols) {
  check(vals.cols() == 1, "scatter_pairs: values must be a column");
  check(row_idx.size() == vals.rows() && col_idx.size() == vals.rows(),
        "scatter_pairs: one slot per value");
  for (size_t i = 0; i < row_idx.size(); ++i)
    check(row_idx[i] < out_rows && col_idx[i] < out_cols, "scatter_pairs: slot out of range");
  auto pv = vals.node();
  auto rs = std::make_shared<std::vector<uint32_t>>(std::move(row_idx));
  auto cs = std::make_shared<std::vector<uint32_t>>(std::move(col_idx));
  Tensor out = make_op(out_rows, out_cols, {pv}, [pv, rs, cs, out_cols](TensorNode& self) {
    if (!pv->needs_grad) return;
    for (size_t i = 0; i < rs->size(); ++i)
      pv->grad[i] += self.grad[size_t((*rs)[i]) * out_cols + (*cs)[i]];
  });
  for (size_t i = 0; i < rs->size(); ++i)
    out.value()[size_t((*rs)[i]) * out_cols + (*cs)[i]] += pv->value[i];
  return out;
}

Tensor scale_rows(const Tensor& a, std::vector<double> w) {
  check(w.size() == a.rows(), "scale_rows: one weight per row");
  auto pa = a.node();
  const size_t C = a.cols();
  auto ws = std::make_shared<std::vector<double>>(std::move(w));
  Tensor out = make_op(a.rows(), C, {pa}, [pa, ws, C](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t r = 0; r < ws->size(); ++r)
      for (size_t c = 0; c < C; ++c) pa->grad[r * C + c] += self.grad[r * C + c] * (*ws)[r];
  });
  for (size_t r = 0; r < ws->size(); ++r)
    for (size_t c = 0; c < C; ++c) out.value()[r * C + c] = pa->value[r * C + c] * (*ws)[r];
  return out;
}

// ---- softmax ----

namespace {

void softmax_span(const double* x, double* y, size_t n) {
  double mx = x[0];
  for (size_t i = 1; i < n; ++i) mx = std::max(mx, x[i]);
  double z = 0.0;
  for (size_t i = 0; i < n; ++i) z += (y[i] = std::exp(x[i] - mx));
  for (size_t i = 0; i < n; ++i) y[i] /= z;
}

// ds_i = y_i * (dy_i - sum_j y_j dy_j)
void softmax_span_back(const double* y, const double* dy, double* dx, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += y[i] * dy[i];
  for (size_t i = 0; i < n; ++i) dx[i] += y[i] * (dy[i] - s);
}

}  // namespace

Tensor softmax_rows(const Tensor& a) {
  auto pa = a.node();
  const size_t R = a.rows(), C = a.cols();
  check(C >= 1, "softmax_rows: empty rows");
  Tensor out = make_op(R, C, {pa}, [pa, R, C](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t r = 0; r < R; ++r)
      softmax_span_back(self.value.data() + r * C, self.grad.data() + r * C,
                        pa->grad.data() + r * C, C);
  });
  for (size_t r = 0; r < R; ++r)
    softmax_span(pa->value.data() + r * C, out.value().data() + r * C, C);
  return out;
}

Tensor segment_softmax(const Tensor& scores, std::vector<size_t> offsets) {
  check(scores.cols() == 1, "segment_softmax: scores must be a column");
  check(!offsets.empty() && offsets.front() == 0 && offsets.back() == scores.rows(),
        "segment_softmax: offsets must cover all rows");
  auto pa = scores.node();
  auto offs = std::make_shared<std::vector<size_t>>(std::move(offsets));
  Tensor out = make_op(scores.rows(), 1, {pa}, [pa, offs](TensorNode& self) {
    if (!pa->needs_grad) return;
    for (size_t k = 0; k + 1 < offs->size(); ++k) {
      size_t b = (*offs)[k], e = (*offs)[k + 1];
      if (e > b)
        softmax_span_back(self.value.data() + b, self.grad.data() + b, pa->grad.data() + b,
                          e - b);
    }
  });
  for (size_t k = 0; k + 1 < offs->size(); ++k) {
    size_t b = (*offs)[k], e = (*offs)[k + 1];
    if (e > b) softmax_span(pa->value.data() + b, out.value().data() + b, e - b);
  }
  return out;
}

Tensor segment_weighted_sum(const Tensor& values, const Tensor& w, std::vector<size_t> offsets) {
  check(w.cols() == 1 && w.rows() == values.rows(), "segment_weighted_sum: one weight per row");
  check(!offsets.empty() && offsets.front() == 0 && offsets.back() == values.rows(),
        "segment_weighted_sum: offsets must cover all rows");
  auto pv = values.node(), pw = w.node();
  const size_t C = values.cols(), K = offsets.size() - 1;
  auto offs = std::make_shared<std::vector<size_t>>(std::move(offsets));
  Tensor out = make_op(K, C, {pv, pw}, [pv, pw, offs, C](TensorNode& self) {
    for (size_t k = 0; k + 1 < offs->size(); ++k) {
      const double* gout = self.grad.data() + k * C;
      for (size_t p = (*offs)[k]; p < (*offs)[k + 1]; ++p) {
        if (pv->needs_grad) {
          double wp = pw->value[p];
          double* gv = pv->grad.data() + p * C;
          for (size_t c = 0; c < C; ++c) gv[c] += wp * gout[c];
        }
        if (pw->needs_grad) {
          double acc = 0.0;
          const double* vrow = pv->value.data() + p * C;
          for (size_t c = 0; c < C; ++c) acc += vrow[c] * gout[c];
          pw->grad[p] += acc;
        }
      }
    }
  });
  for (size_t k = 0; k < K; ++k) {
    double* orow = out.value().data() + k * C;
    for (size_t p = (*offs)[k]; p < (*offs)[k + 1]; ++p) {
      double wp = pw->value[p];
      const double* vrow = pv->value.data() + p * C;
      for (size_t c = 0; c < C; ++c) orow[c] += wp * vrow[c];
    }
  }
  return out;
}

// ---- losses ----

Tensor bce_logits(const Tensor& logits, std::vector<double> labels) {
  check(logits.cols() == 1, "bce_logits: logits must be a column");
  check(labels.size() == logits.rows(), "bce_logits: one label per logit");
  auto pl = logits.node();
  auto ys = std::make_shared<std::vector<double>>(std::move(labels));
  const size_t R = logits.rows();
  Tensor out = make_op(1, 1, {pl}, [pl, ys, R](TensorNode& self) {
    if (!pl->needs_grad) return;
    for (size_t i = 0; i < R; ++i) {
      double p = 1.0 / (1.0 + std::exp(-pl->value[i]));
      pl->grad[i] += self.grad[0] * (p - (*ys)[i]) / double(R);
    }
  });
  double acc = 0.0;
  for (size_t i = 0; i < R; ++i) {
    double s = pl->value[i], y = (*ys)[i];
    acc += std::max(s, 0.0) - s * y + std::log1p(std::exp(-std::abs(s)));
  }
  out.value()[0] = acc / double(R);
  return out;
}

Tensor masked_mse(const Tensor& pred, std::vector<double> target, std::vector<double> mask) {
  check(target.size() == pred.size() && mask.size() == pred.size(),
        "masked_mse: target/mask shape mismatch");
  auto pp = pred.node();
  auto tg = std::make_shared<std::vector<double>>(std::move(target));
  auto mk = std::make_shared<std::vector<double>>(std::move(mask));
  double count = 0.0;
  for (double m : *mk) count += m;
  check(count > 0.0, "masked_mse: empty mask");
  Tensor out = make_op(1, 1, {pp}, [pp, tg, mk, count](TensorNode& self) {
    if (!pp->needs_grad) return;
    for (size_t i = 0; i < pp->value.size(); ++i)
      if ((*mk)[i] != 0.0)
        pp->grad[i] += self.grad[0] * 2.0 * (pp->value[i] - (*tg)[i]) / count;
  });
  double acc = 0.0;
  for (size_t i = 0; i < pp->value.size(); ++i) {
    if ((*mk)[i] == 0.0) continue;
    double d = pp->value[i] - (*tg)[i];
    acc += d * d;
  }
  out.value()[0] = acc / count;
  return out;
}

double masked_mae(const std::vector<double>& pred, const std::vector<double>& target,
                  const std::vector<double>& mask) {
  double acc = 0.0, count = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (mask[i] == 0.0) continue;
    acc += std::abs(pred[i] - target[i]);
    count += 1.0;
  }
  return count > 0.0 ? acc / count : 0.0;
}

}  // namespace tmpgnn
