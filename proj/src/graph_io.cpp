// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <system_error>
#include <vector>

namespace tmpgnn {

namespace {

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& what) {
  throw GraphError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

uint32_t parse_u32(std::string_view s, const std::string& path, size_t line) {
  uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    fail(path, line, "expected nonnegative integer, got '" + std::string(s) + "'");
  return v;
}

double parse_f64(std::string_view s, const std::string& path, size_t line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    fail(path, line, "expected number, got '" + std::string(s) + "'");
  return v;
}

std::string format_f64(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::vector<std::pair<uint32_t, int32_t>> load_label_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open labels file " + path);
  std::string line;
  size_t lineno = 0;
  std::vector<std::pair<uint32_t, int32_t>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = strip_cr(line);
    if (lineno == 1) {
      if (sv != "node,community") fail(path, 1, "expected header 'node,community'");
      continue;
    }
    if (sv.empty()) continue;
    auto cols = split_csv(sv);
    if (cols.size() != 2) fail(path, lineno, "expected 2 columns");
    rows.emplace_back(parse_u32(cols[0], path, lineno),
                      int32_t(parse_u32(cols[1], path, lineno)));
  }
  return rows;
}

}  // namespace

TemporalMultilayerGraph load_graph(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);

  TemporalMultilayerGraph g;
  g.directed = opts.directed;

  std::string line;
  size_t lineno = 0;
  uint32_t num_streams = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = strip_cr(line);
    if (lineno == 1) {
      auto cols = split_csv(sv);
      if (cols.size() < 3 || cols[0] != "layer" || cols[1] != "src" || cols[2] != "dst")
        fail(path, 1, "expected header 'layer,src,dst[,f_0..]'");
      for (size_t i = 3; i < cols.size(); ++i) {
        std::string want = "f_" + std::to_string(i - 3);
        if (cols[i] != want) fail(path, 1, "expected feature column '" + want + "'");
      }
      num_streams = uint32_t(cols.size() - 3);
      continue;
    }
    if (sv.empty()) continue;
    auto cols = split_csv(sv);
    if (cols.size() != size_t(3) + num_streams)
      fail(path, lineno, "expected " + std::to_string(3 + num_streams) + " columns, got " +
                             std::to_string(cols.size()));
    TemporalEdge e;
    e.layer = parse_u32(cols[0], path, lineno);
    e.src = parse_u32(cols[1], path, lineno);
    e.dst = parse_u32(cols[2], path, lineno);
    e.features.reserve(num_streams);
    for (uint32_t d = 0; d < num_streams; ++d)
      e.features.push_back(parse_f64(cols[3 + d], path, lineno));
    if (opts.num_layers && e.layer >= *opts.num_layers)
      fail(path, lineno, "layer " + std::to_string(e.layer) + " outside declared range");
    if (opts.num_nodes && (e.src >= *opts.num_nodes || e.dst >= *opts.num_nodes))
      fail(path, lineno, "node index outside declared range");
    g.edges.push_back(std::move(e));
  }
  if (lineno == 0) fail(path, 0, "missing header row");

  g.num_streams = num_streams;
  uint32_t max_node = 0, max_layer = 0;
  for (const auto& e : g.edges) {
    max_node = std::max({max_node, e.src, e.dst});
    max_layer = std::max(max_layer, e.layer);
  }
  g.num_nodes = opts.num_nodes.value_or(g.edges.empty() ? 1 : max_node + 1);
  g.num_layers = opts.num_layers.value_or(g.edges.empty() ? 1 : max_layer + 1);

  std::sort(g.edges.begin(), g.edges.end(), [](const TemporalEdge& a, const TemporalEdge& b) {
    return std::tie(a.layer, a.src, a.dst) < std::tie(b.layer, b.src, b.dst);
  });

  if (opts.labels_path) {
    g.node_labels.assign(g.num_nodes, -1);
    for (auto [node, community] : load_label_rows(*opts.labels_path)) {
      if (node >= g.num_nodes)
        throw GraphError(*opts.labels_path + ": node " + std::to_string(node) + " out of range");
      g.node_labels[node] = community;
    }
  }

  g.validate();
  return g;
}

void save_graph(const TemporalMultilayerGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // no newline translation
  if (!out) throw GraphError("cannot write " + path);
  out << "layer,src,dst";
  for (uint32_t d = 0; d < g.num_streams; ++d) out << ",f_" << d;
  out << "\n";
  for (const auto& e : g.edges) {
    out << e.layer << ',' << e.src << ',' << e.dst;
    for (double f : e.features) out << ',' << format_f64(f);
    out << "\n";
  }
  if (!out) throw GraphError("write failed for " + path);
}

void save_labels(const TemporalMultilayerGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write " + path);
  out << "node,community\n";
  for (uint32_t n = 0; n < g.num_nodes; ++n) {
    if (g.has_labels() && g.node_labels[n] >= 0) out << n << ',' << g.node_labels[n] << "\n";
  }
  if (!out) throw GraphError("write failed for " + path);
}

}  // namespace tmpgnn
