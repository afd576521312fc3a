// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmpgnn/distances.hpp"
#include "tmpgnn/rng.hpp"

namespace tmpgnn {

// Bourgain-style landmark family: c copies of k = ceil(log2 n) scales, where
// scale i includes each node independently with probability 2^-i. Empty draws
// are redrawn, so every set is nonempty.
struct AnchorSetFamily {
  size_t universe = 0;  // node count the sets were drawn from
  uint32_t scales = 0;  // k
  uint32_t copies = 0;  // c
  uint64_t seed = 0;
  std::vector<std::vector<uint32_t>> sets;  // J = c*k, each sorted ascending

  size_t count() const { return sets.size(); }
};

AnchorSetFamily sample_anchor_sets(size_t universe, uint32_t copies, uint64_t seed);

uint32_t anchor_scale_count(size_t universe);  // ceil(log2 universe)

struct AnchorHit {
  uint32_t node = 0;
  uint32_t dist = 0;
};

// Closest member of the set by truncated hop distance; ties break toward the
// lowest node index. Absent when nothing in the set is within `cutoff` hops.
std::optional<AnchorHit> nearest_in_anchor(uint32_t v, const std::vector<uint32_t>& set,
                                           const TruncatedDistanceMap& dmap, uint32_t cutoff = 2);

// Round-trip serialization so a run's anchors can be pinned in its manifest.
std::string anchors_to_json(const AnchorSetFamily& fam);
AnchorSetFamily anchors_from_json(const std::string& text);

}  // namespace tmpgnn
