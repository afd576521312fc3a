// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP kernel comparison: sparse mat-vec, truncated multi-source
// BFS, and dense matmul. The parallel paths must stay bit-identical to the
// serial references, so this also asserts equality while timing.
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "tmpgnn/csr.hpp"
#include "tmpgnn/distances.hpp"
#include "tmpgnn/rng.hpp"
#include "tmpgnn/tensor.hpp"
#include "tmpgnn/threading.hpp"

using namespace tmpgnn;

namespace {

CsrMatrix random_sparse(uint32_t n, uint32_t per_row, Rng& rng) {
  std::vector<Triplet> trips;
  trips.reserve(size_t(n) * per_row);
  for (uint32_t r = 0; r < n; ++r)
    for (uint32_t k = 0; k < per_row; ++k)
      trips.push_back({r, uint32_t(rng.uniform_int(n)), rng.uniform01()});
  return CsrMatrix::from_triplets(n, n, trips);
}

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    double t0 = omp_get_wtime();
    fn();
    double dt = omp_get_wtime() - t0;
    if (dt < best) best = dt;
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-24s serial %9.4f ms   parallel %9.4f ms   speedup %5.2fx   %s\n", name,
              serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
              identical ? "bit-identical" : "MISMATCH");
  if (!identical) std::exit(1);
}

}  // namespace

int main() {
  Rng rng(42);
  std::printf("threads: %d\n", max_threads());

  {
    CsrMatrix m = random_sparse(20000, 16, rng);
    std::vector<double> x(m.cols);
    for (auto& v : x) v = rng.uniform01();
    std::vector<double> ys(m.rows), yp(m.rows);
    double ts = time_best_of(5, [&] { spmv_serial(m, x.data(), ys.data()); });
    double tp = time_best_of(5, [&] { spmv_parallel(m, x.data(), yp.data()); });
    report("spmv 20k x 16", ts, tp, ys == yp);
  }

  {
    CsrMatrix m = random_sparse(8000, 8, rng);
    TruncatedDistanceMap ds, dp;
    double ts = time_best_of(3, [&] { ds = truncated_distances_serial(m, 3); });
    double tp = time_best_of(3, [&] { dp = truncated_distances_parallel(m, 3); });
    bool same = ds.offsets == dp.offsets && ds.node == dp.node && ds.hops == dp.hops;
    report("bfs balls 8k, q=3", ts, tp, same);
  }

  {
    const size_t n = 384;
    std::vector<double> a(n * n), b(n * n), cs(n * n), cp(n * n);
    for (auto& v : a) v = rng.uniform01();
    for (auto& v : b) v = rng.uniform01();
    double ts = time_best_of(3, [&] { matmul_serial(a.data(), b.data(), cs.data(), n, n, n); });
    double tp = time_best_of(3, [&] { matmul_parallel(a.data(), b.data(), cp.data(), n, n, n); });
    report("matmul 384^3", ts, tp, cs == cp);
  }

  return 0;
}
