// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "tmpgnn/graph.hpp"

namespace tmpgnn {

struct LoadOptions {
  // Explicit sizes; inferred as max index + 1 when absent. Rows outside an
  // explicit bound are a validation error rather than a silent resize.
  std::optional<uint32_t> num_nodes;
  std::optional<uint32_t> num_layers;
  std::optional<std::string> labels_path;  // CSV `node,community`
  bool directed = true;
};

// Edge CSV `layer,src,dst,f_0..f_{D-1}`, UTF-8, header row required; the
// stream count D comes from the header. Parse errors carry the line number.
TemporalMultilayerGraph load_graph(const std::string& path, const LoadOptions& opts = {});

// Inverse of load_graph: shortest round-trip float formatting, so
// load_graph(save_graph(g)) == g bit for bit.
void save_graph(const TemporalMultilayerGraph& g, const std::string& path);

void save_labels(const TemporalMultilayerGraph& g, const std::string& path);

}  // namespace tmpgnn
