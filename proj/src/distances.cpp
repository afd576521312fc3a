// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/distances.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tmpgnn/threading.hpp"

namespace tmpgnn {

CsrMatrix supra_skeleton(const TemporalMultilayerGraph& g, uint32_t delta, bool interlayer) {
  if (delta == 0) throw std::invalid_argument("supra_skeleton: delta must be positive");
  const uint32_t N = g.num_nodes, T = g.num_layers;
  std::vector<Triplet> trips;
  for (const auto& e : g.edges) {
    if (e.src == e.dst) continue;  // hop counts ignore self-loops
    uint32_t a = e.src + N * e.layer, b = e.dst + N * e.layer;
    trips.push_back({a, b, 1.0});
    trips.push_back({b, a, 1.0});
  }
  if (interlayer) {
    for (uint32_t t = 0; t + delta < T; ++t) {
      for (uint32_t n = 0; n < N; ++n) {
        uint32_t a = n + N * t, b = n + N * (t + delta);
        trips.push_back({a, b, 1.0});
        trips.push_back({b, a, 1.0});
      }
    }
  }
  size_t nt = size_t(N) * T;
  return CsrMatrix::from_triplets(nt, nt, trips);
}

CsrMatrix layer_skeleton(const TemporalMultilayerGraph& g, uint32_t t) {
  if (t >= g.num_layers) throw std::invalid_argument("layer_skeleton: layer out of range");
  std::vector<Triplet> trips;
  for (const auto& e : g.edges) {
    if (e.layer != t || e.src == e.dst) continue;
    trips.push_back({e.src, e.dst, 1.0});
    trips.push_back({e.dst, e.src, 1.0});
  }
  return CsrMatrix::from_triplets(g.num_nodes, g.num_nodes, trips);
}

int TruncatedDistanceMap::distance(uint32_t u, uint32_t v) const {
  const uint32_t* first = node.data() + offsets[u];
  const uint32_t* last = node.data() + offsets[u + 1];
  const uint32_t* it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return -1;
  return hops[size_t(it - node.data())];
}

namespace {

// One source's truncated BFS. `mark` holds the last stamp each node was
// visited under, so nothing gets cleared between sources.
void bfs_ball(const CsrMatrix& adj, uint32_t src, uint32_t q, std::vector<uint32_t>& mark,
              uint32_t stamp, std::vector<uint32_t>& queue,
              std::vector<std::pair<uint32_t, uint8_t>>& out) {
  out.clear();
  queue.clear();
  queue.push_back(src);
  mark[src] = stamp;
  out.emplace_back(src, 0);
  size_t head = 0;
  uint8_t depth = 0;
  while (head < queue.size() && depth < q) {
    ++depth;
    size_t level_end = queue.size();
    for (; head < level_end; ++head) {
      uint32_t u = queue[head];
      for (size_t k = adj.row_ptr[u]; k < adj.row_ptr[u + 1]; ++k) {
        uint32_t v = adj.col[k];
        if (mark[v] == stamp) continue;
        mark[v] = stamp;
        queue.push_back(v);
        out.emplace_back(v, depth);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

TruncatedDistanceMap assemble(const CsrMatrix& adj, uint32_t q,
                              std::vector<std::vector<std::pair<uint32_t, uint8_t>>>& balls) {
  TruncatedDistanceMap m;
  m.q = q;
  m.num_nodes = adj.rows;
  m.offsets.resize(adj.rows + 1);
  m.offsets[0] = 0;
  size_t total = 0;
  for (size_t i = 0; i < adj.rows; ++i) {
    total += balls[i].size();
    m.offsets[i + 1] = total;
  }
  m.node.resize(total);
  m.hops.resize(total);
  for (size_t i = 0; i < adj.rows; ++i) {
    size_t base = m.offsets[i];
    for (size_t k = 0; k < balls[i].size(); ++k) {
      m.node[base + k] = balls[i][k].first;
      m.hops[base + k] = balls[i][k].second;
    }
  }
  return m;
}

}  // namespace

TruncatedDistanceMap truncated_distances_serial(const CsrMatrix& adj, uint32_t q) {
  if (adj.rows != adj.cols) throw std::invalid_argument("truncated_distances: matrix not square");
  if (q == 0) throw std::invalid_argument("truncated_distances: q must be >= 1");
  std::vector<std::vector<std::pair<uint32_t, uint8_t>>> balls(adj.rows);
  std::vector<uint32_t> mark(adj.rows, 0), queue;
  for (uint32_t s = 0; s < adj.rows; ++s) bfs_ball(adj, s, q, mark, s + 1, queue, balls[s]);
  return assemble(adj, q, balls);
}

TruncatedDistanceMap truncated_distances_parallel(const CsrMatrix& adj, uint32_t q) {
  if (adj.rows != adj.cols) throw std::invalid_argument("truncated_distances: matrix not square");
  if (q == 0) throw std::invalid_argument("truncated_distances: q must be >= 1");
  std::vector<std::vector<std::pair<uint32_t, uint8_t>>> balls(adj.rows);
#pragma omp parallel num_threads(max_threads())
  {
    std::vector<uint32_t> mark(adj.rows, 0), queue;
#pragma omp for schedule(dynamic, 16)
    for (int64_t s = 0; s < int64_t(adj.rows); ++s)
      bfs_ball(adj, uint32_t(s), q, mark, uint32_t(s) + 1, queue, balls[size_t(s)]);
  }
  return assemble(adj, q, balls);
}

TruncatedDistanceMap truncated_distances(const CsrMatrix& adj, uint32_t q) {
  if (adj.rows >= 512 && max_threads() > 1) return truncated_distances_parallel(adj, q);
  return truncated_distances_serial(adj, q);
}

}  // namespace tmpgnn
