// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tmpgnn {

struct Triplet {
  uint32_t row;
  uint32_t col;
  double value;
};

// Compressed sparse row matrix. Column indices are sorted within each row
// and duplicate coordinates are summed at assembly.
struct CsrMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<size_t> row_ptr;  // rows+1 entries
  std::vector<uint32_t> col;
  std::vector<double> val;

  static CsrMatrix from_triplets(size_t rows, size_t cols, std::vector<Triplet> entries);

  size_t nnz() const { return val.size(); }
  double at(size_t r, size_t c) const;  // 0 when absent
  double max_row_sum_abs() const;
};

// y = M x. The parallel kernel is row-parallel, so per-row accumulation
// order is fixed and results are bit-identical to the serial reference.
void spmv_serial(const CsrMatrix& m, const double* x, double* y);
void spmv_parallel(const CsrMatrix& m, const double* x, double* y);
void spmv(const CsrMatrix& m, std::span<const double> x, std::span<double> y);

}  // namespace tmpgnn
