// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tmpgnn/tensor.hpp"

using namespace tmpgnn;

namespace {

// Store with two generic parameter blocks used by most FD checks.
struct Fixture {
  ParamStore store;
  Tensor A, B;
  Fixture() {
    Rng rng(7);
    A = store.create("A", 3, 4, rng);
    B = store.create("B", 4, 2, rng);
  }
};

}  // namespace

TEST_CASE("elementwise values") {
  Tensor a = Tensor::from(2, 2, {1, 2, 3, 4});
  Tensor b = Tensor::from(2, 2, {5, 6, 7, 8});
  CHECK(add(a, b).value() == std::vector<double>{6, 8, 10, 12});
  CHECK(sub(a, b).value() == std::vector<double>{-4, -4, -4, -4});
  CHECK(mul(a, b).value() == std::vector<double>{5, 12, 21, 32});
  CHECK(affine(a, 2.0, 1.0).value() == std::vector<double>{3, 5, 7, 9});
  CHECK(relu(Tensor::from(1, 3, {-1, 0, 2})).value() == std::vector<double>{0, 0, 2});
  CHECK(tanh(Tensor::scalar(0.5)).item() == doctest::Approx(std::tanh(0.5)));
  CHECK(sigmoid(Tensor::scalar(0.5)).item() == doctest::Approx(1.0 / (1.0 + std::exp(-0.5))));
  CHECK(add_rowvec(a, Tensor::from(1, 2, {10, 20})).value() ==
        std::vector<double>{11, 22, 13, 24});
  CHECK(mul_rowvec(a, Tensor::from(1, 2, {10, 20})).value() ==
        std::vector<double>{10, 40, 30, 80});
  CHECK(mul_scalar(a, Tensor::scalar(3.0)).value() == std::vector<double>{3, 6, 9, 12});
}

TEST_CASE("matmul and reductions") {
  Tensor a = Tensor::from(2, 3, {1, 2, 3, 4, 5, 6});
  Tensor b = Tensor::from(3, 2, {7, 8, 9, 10, 11, 12});
  CHECK(matmul(a, b).value() == std::vector<double>{58, 64, 139, 154});
  CHECK(rowsum(a).value() == std::vector<double>{6, 15});
  CHECK(sum_all(a).item() == 21.0);
  CHECK(mean_all(a).item() == doctest::Approx(3.5));
  CHECK(dot(a, a).item() == doctest::Approx(91.0));
  CHECK_THROWS(matmul(a, a));
}

TEST_CASE("shape ops values") {
  Tensor a = Tensor::from(2, 2, {1, 2, 3, 4});
  Tensor b = Tensor::from(2, 1, {9, 10});
  CHECK(concat_cols({a, b}).value() == std::vector<double>{1, 2, 9, 3, 4, 10});
  CHECK(concat_rows({a, a}).value() == std::vector<double>{1, 2, 3, 4, 1, 2, 3, 4});
  CHECK(gather_rows(a, {1, 0, 1}).value() == std::vector<double>{3, 4, 1, 2, 3, 4});
  CHECK(scatter_sum(a, {1, 1}, 3).value() == std::vector<double>{0, 0, 4, 6, 0, 0});
  CHECK(scatter_pairs(Tensor::from(2, 1, {5, 6}), {0, 1}, {1, 0}, 2, 2).value() ==
        std::vector<double>{0, 5, 6, 0});
  CHECK(scale_rows(a, {2.0, 0.5}).value() == std::vector<double>{2, 4, 1.5, 2});
}

TEST_CASE("softmax families") {
  Tensor a = Tensor::from(2, 2, {0, 0, 1, 3});
  auto sm = softmax_rows(a).value();
  CHECK(sm[0] == doctest::Approx(0.5));
  CHECK(sm[1] == doctest::Approx(0.5));
  CHECK(sm[2] + sm[3] == doctest::Approx(1.0));
  CHECK(sm[3] > sm[2]);

  Tensor scores = Tensor::from(4, 1, {1, 1, 2, 2});
  auto seg = segment_softmax(scores, {0, 2, 4}).value();
  CHECK(seg[0] == doctest::Approx(0.5));
  CHECK(seg[1] == doctest::Approx(0.5));
  CHECK(seg[2] == doctest::Approx(0.5));
  CHECK(seg[3] == doctest::Approx(0.5));

  Tensor vals = Tensor::from(4, 2, {1, 0, 0, 1, 2, 2, 4, 4});
  Tensor w = Tensor::from(4, 1, {0.25, 0.75, 0.5, 0.5});
  auto out = segment_weighted_sum(vals, w, {0, 2, 4}).value();
  CHECK(out == std::vector<double>{0.25, 0.75, 3.0, 3.0});
}

TEST_CASE("losses and helpers") {
  Tensor logits = Tensor::from(2, 1, {0.0, 100.0});
  double loss = bce_logits(logits, {1.0, 1.0}).item();
  // -log(sigma(0)) / 2 = log(2)/2, the saturated term adds ~0
  CHECK(loss == doctest::Approx(std::log(2.0) / 2).epsilon(1e-9));

  Tensor pred = Tensor::from(2, 2, {1, 2, 3, 4});
  CHECK(masked_mse(pred, {0, 2, 0, 6}, {1, 1, 0, 1}).item() ==
        doctest::Approx((1.0 + 0.0 + 4.0) / 3.0));
  CHECK_THROWS(masked_mse(pred, {0, 0, 0, 0}, {0, 0, 0, 0}).item());

  CHECK(masked_mae({1, 2, 3}, {0, 2, 5}, {1, 0, 1}) == doctest::Approx(1.5));
}

TEST_CASE("gradients of every op via finite differences") {
  Fixture f;
  auto check = [&](const char* name, const std::function<Tensor()>& loss) {
    INFO(name);
    CHECK(oracles::fd_worst_rel_err(f.store, loss) < 1e-6);
  };

  check("add/mul/tanh", [&] {
    return sum_all(mul(tanh(f.A), add(f.A, affine(f.A, 0.5, 0.1))));
  });
  check("sub/sigmoid", [&] { return mean_all(sigmoid(sub(f.A, affine(f.A, 2.0, 0.0)))); });
  check("matmul/rowsum", [&] { return sum_all(rowsum(matmul(f.A, f.B))); });
  check("dot", [&] { return dot(f.A, tanh(f.A)); });
  check("add_rowvec/mul_rowvec", [&] {
    Tensor row = rowsum(matmul(f.A, f.B));              // 3x1
    Tensor vec = matmul(Tensor::from(1, 3, {1, 2, 3}), f.A);  // 1x4
    return sum_all(mul_rowvec(add_rowvec(f.A, vec), vec));
  });
  check("mul_scalar", [&] {
    Tensor s = sum_all(f.B);
    return sum_all(mul_scalar(f.A, s));
  });
  check("concat_cols/rows", [&] {
    Tensor c = concat_cols({f.A, tanh(f.A)});
    Tensor r = concat_rows({c, affine(c, -1.0, 0.0)});
    return mean_all(mul(r, r));
  });
  check("gather/scatter_sum", [&] {
    Tensor gathered = gather_rows(f.A, {2, 0, 0, 1});
    return sum_all(tanh(scatter_sum(gathered, {0, 1, 1, 0}, 2)));
  });
  check("scatter_pairs", [&] {
    Tensor vals = rowsum(matmul(f.A, f.B));  // 3x1
    return sum_all(sigmoid(scatter_pairs(vals, {0, 2, 1}, {1, 0, 1}, 3, 2)));
  });
  check("scale_rows", [&] { return sum_all(scale_rows(tanh(f.A), {0.5, -1.0, 2.0})); });
  check("softmax_rows", [&] { return sum_all(mul(softmax_rows(f.A), f.A)); });
  check("segment_softmax/weighted_sum", [&] {
    Tensor scores = rowsum(tanh(f.A));  // 3x1, segments {0,1} and {2}
    Tensor alpha = segment_softmax(scores, {0, 2, 3});
    return sum_all(segment_weighted_sum(f.A, alpha, {0, 2, 3}));
  });
  check("bce_logits", [&] { return bce_logits(rowsum(f.A), {1.0, 0.0, 1.0}); });
  check("masked_mse", [&] {
    return masked_mse(sigmoid(matmul(f.A, f.B)), {0.2, 0.8, 0.5, 0.1, 0.9, 0.4},
                      {1, 0, 1, 1, 0, 1});
  });
  check("relu away from the kink", [&] { return sum_all(relu(affine(f.A, 1.0, 0.05))); });
}

TEST_CASE("leaf gradients accumulate, interior gradients reset") {
  ParamStore store;
  Rng rng(3);
  Tensor x = store.create("x", 1, 1, rng);
  x.value()[0] = 2.0;

  // y = x*x + x: dy/dx = 2x + 1 = 5; x participates twice
  Tensor loss = add(mul(x, x), x);
  store.zero_grad();
  loss.backward();
  CHECK(x.grad()[0] == doctest::Approx(5.0));

  // a second backward without zero_grad doubles the leaf gradient
  Tensor loss2 = add(mul(x, x), x);
  loss2.backward();
  CHECK(x.grad()[0] == doctest::Approx(10.0));

  // while interior nodes stay correct (reset per backward call)
  store.zero_grad();
  Tensor inner = mul(x, x);
  Tensor outer = add(inner, inner);
  outer.backward();
  CHECK(x.grad()[0] == doctest::Approx(8.0));  // d(2x^2)/dx
}

TEST_CASE("backward requires a scalar root") {
  ParamStore store;
  Rng rng(4);
  Tensor x = store.create("x", 2, 2, rng);
  Tensor y = mul(x, x);
  CHECK_THROWS(y.backward());
}

TEST_CASE("shape mismatches throw") {
  Tensor a = Tensor::from(2, 2, {1, 2, 3, 4});
  Tensor b = Tensor::from(2, 1, {1, 2});
  CHECK_THROWS(add(a, b));
  CHECK_THROWS(mul(a, b));
  CHECK_THROWS(add_rowvec(a, b));
  CHECK_THROWS(dot(a, b));
  CHECK_THROWS(gather_rows(a, {5}));
  CHECK_THROWS(segment_softmax(Tensor::from(2, 2, {1, 2, 3, 4}), {0, 2}));
}

TEST_CASE("matmul parallel kernel is bit-identical to serial") {
  Rng rng(11);
  const size_t m = 70, k = 90, n = 80;
  std::vector<double> a(m * k), b(k * n), cs(m * n), cp(m * n);
  for (auto& v : a) v = rng.uniform(-1.0, 1.0);
  for (auto& v : b) v = rng.uniform(-1.0, 1.0);
  matmul_serial(a.data(), b.data(), cs.data(), m, k, n);
  matmul_parallel(a.data(), b.data(), cp.data(), m, k, n);
  CHECK(cs == cp);
}
