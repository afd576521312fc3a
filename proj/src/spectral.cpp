// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/spectral.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace tmpgnn {

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

EigenPair power_iteration(const CsrMatrix& M, const PowerIterOptions& opts) {
  if (M.rows != M.cols) throw SpectralError("power_iteration: matrix not square");
  if (M.rows == 0) throw SpectralError("power_iteration: empty matrix");
  const size_t n = M.rows;
  const double max_row = M.max_row_sum_abs();
  if (max_row == 0.0) throw SpectralError("power_iteration: zero matrix has no dominant direction");

  // Positive diagonal shift; chain couplings are bipartite with a -lambda
  // twin of the top eigenvalue, and the plain iteration never settles there.
  const double shift = 0.5 * max_row;
  const double eps = opts.reducibility_eps;

  std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
  std::vector<double> y(n);
  double lambda_prev = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    spmv(M, x, y);
    double xsum = std::accumulate(x.begin(), x.end(), 0.0);
    for (size_t i = 0; i < n; ++i) y[i] += shift * x[i] + eps * xsum;
    double lambda_shifted = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    double resid = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double r = y[i] - lambda_shifted * x[i];
      resid += r * r;
    }
    resid = std::sqrt(resid);
    double lambda = lambda_shifted - shift;
    if (it > 1 && std::abs(lambda - lambda_prev) < opts.tol && resid < 10.0 * opts.tol) {
      EigenPair out;
      out.value = lambda;
      out.iterations = it;
      out.residual = resid;
      double s = std::accumulate(x.begin(), x.end(), 0.0);
      if (s < 0.0)
        for (double& v : x) v = -v;
      out.vector = std::move(x);
      return out;
    }
    lambda_prev = lambda;
    double ny = norm2(y);
    if (ny == 0.0) throw SpectralError("power_iteration: iterate collapsed to zero", x);
    for (size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  throw SpectralError("power_iteration: no convergence after " + std::to_string(opts.max_iter) +
                          " iterations (last lambda " + std::to_string(lambda_prev) + ")",
                      x);
}

namespace {

CsrMatrix coupling_csr(const InterLayerCoupling& c) {
  std::vector<Triplet> trips;
  for (uint32_t t = 0; t < c.num_layers; ++t)
    for (uint32_t tp = 0; tp < c.num_layers; ++tp)
      if (c.at(t, tp) != 0.0) trips.push_back({t, tp, c.at(t, tp)});
  return CsrMatrix::from_triplets(c.num_layers, c.num_layers, trips);
}

}  // namespace

OmegaSelection select_omega(const TemporalMultilayerGraph& g, const InterLayerCoupling& coupling,
                            const OmegaSearchOptions& opts, StreamSelector sel) {
  // A~ kron I shares A~'s dominant eigenvalue (identity factor), so mu1 comes
  // from the cheap T x T problem.
  EigenPair mu = power_iteration(coupling_csr(coupling), opts.power);
  if (mu.value <= 0.0) throw SpectralError("select_omega: coupling has no positive eigenvalue");

  OmegaSelection best;
  best.mu1 = mu.value;
  best.rel_gap = std::numeric_limits<double>::infinity();
  for (double omega = opts.start; omega <= opts.cap; omega *= opts.growth) {
    SupraMatrix s = build_supracentrality(g, omega, coupling, sel);
    EigenPair ev = power_iteration(s.mat, opts.power);
    double target = omega * mu.value;
    double gap = std::abs(ev.value - target) / target;
    ++best.steps;
    if (gap < best.rel_gap) {
      best.omega = omega;
      best.lambda_max = ev.value;
      best.rel_gap = gap;
    }
    if (gap < opts.tol) {
      best.omega = omega;
      best.lambda_max = ev.value;
      best.rel_gap = gap;
      return best;
    }
  }
  throw SpectralError("select_omega: no omega under cap " + std::to_string(opts.cap) +
                      " reached relative gap " + std::to_string(opts.tol) + " (best " +
                      std::to_string(best.rel_gap) + " at omega " + std::to_string(best.omega) +
                      ")");
}

CentralitySummary centralities(const SupraMatrix& supra, const PowerIterOptions& opts) {
  EigenPair ev = power_iteration(supra.mat, opts);
  CentralitySummary cs;
  cs.num_nodes = supra.num_nodes;
  cs.num_layers = supra.num_layers;
  cs.omega = supra.omega;
  cs.lambda_max = ev.value;
  cs.joint.resize(ev.vector.size());
  for (size_t i = 0; i < ev.vector.size(); ++i) cs.joint[i] = std::max(ev.vector[i], 0.0);
  cs.mlc.assign(supra.num_layers, 0.0);
  for (uint32_t t = 0; t < supra.num_layers; ++t)
    for (uint32_t v = 0; v < supra.num_nodes; ++v) cs.mlc[t] += cs.joint_at(v, t);
  cs.conditional.assign(cs.joint.size(), 0.0);
  for (uint32_t t = 0; t < supra.num_layers; ++t) {
    if (cs.mlc[t] <= 0.0) {
      cs.degenerate_layers.push_back(t);
      continue;  // conditional stays 0 for the whole layer
    }
    for (uint32_t v = 0; v < supra.num_nodes; ++v)
      cs.conditional[size_t(v) + size_t(supra.num_nodes) * t] = cs.joint_at(v, t) / cs.mlc[t];
  }
  return cs;
}

StationaryCc stationary_cc(const TemporalMultilayerGraph& g, const InterLayerCoupling& coupling,
                           const OmegaSearchOptions& opts, StreamSelector sel) {
  StationaryCc out;
  out.selection = select_omega(g, coupling, opts, sel);
  SupraMatrix s = build_supracentrality(g, out.selection.omega, coupling, sel);
  out.summary = centralities(s, opts.power);
  out.cc.assign(g.num_nodes, 0.0);
  for (uint32_t v = 0; v < g.num_nodes; ++v) {
    double acc = 0.0;
    for (uint32_t t = 0; t < g.num_layers; ++t) acc += out.summary.cc_at(v, t);
    out.cc[v] = acc / g.num_layers;
  }
  return out;
}

}  // namespace tmpgnn
