// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/csr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "tmpgnn/threading.hpp"

namespace tmpgnn {

CsrMatrix CsrMatrix::from_triplets(size_t rows, size_t cols, std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row >= rows || t.col >= cols) throw std::invalid_argument("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  m.col.reserve(entries.size());
  m.val.reserve(entries.size());

  size_t i = 0;
  for (size_t r = 0; r < rows; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      double v = entries[i].value;
      uint32_t c = entries[i].col;
      ++i;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;  // duplicates sum
        ++i;
      }
      m.col.push_back(c);
      m.val.push_back(v);
    }
    m.row_ptr[r + 1] = m.col.size();
  }
  return m;
}

double CsrMatrix::at(size_t r, size_t c) const {
  assert(r < rows && c < cols);
  for (size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) {
    if (col[i] == c) return val[i];
  }
  return 0.0;
}

double CsrMatrix::max_row_sum_abs() const {
  double best = 0.0;
  for (size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) s += std::abs(val[i]);
    best = std::max(best, s);
  }
  return best;
}

void spmv_serial(const CsrMatrix& m, const double* x, double* y) {
  for (size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    for (size_t i = m.row_ptr[r]; i < m.row_ptr[r + 1]; ++i) acc += m.val[i] * x[m.col[i]];
    y[r] = acc;
  }
}

void spmv_parallel(const CsrMatrix& m, const double* x, double* y) {
  const long n = static_cast<long>(m.rows);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long r = 0; r < n; ++r) {
    double acc = 0.0;
    for (size_t i = m.row_ptr[r]; i < m.row_ptr[r + 1]; ++i) acc += m.val[i] * x[m.col[i]];
    y[r] = acc;
  }
}

void spmv(const CsrMatrix& m, std::span<const double> x, std::span<double> y) {
  if (x.size() != m.cols || y.size() != m.rows) throw std::invalid_argument("spmv shape mismatch");
  if (m.rows >= 256 && max_threads() > 1) {
    spmv_parallel(m, x.data(), y.data());
  } else {
    spmv_serial(m, x.data(), y.data());
  }
}

}  // namespace tmpgnn
