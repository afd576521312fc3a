// SPDX-License-Identifier: Apache-2.0
#include "tmpgnn/anchors.hpp"

#include <bit>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tmpgnn {

uint32_t anchor_scale_count(size_t universe) {
  if (universe < 2) throw std::invalid_argument("anchor sets need at least 2 nodes");
  return uint32_t(std::bit_width(universe - 1));  // ceil(log2 n)
}

AnchorSetFamily sample_anchor_sets(size_t universe, uint32_t copies, uint64_t seed) {
  if (copies == 0) throw std::invalid_argument("anchor copies must be >= 1");
  AnchorSetFamily fam;
  fam.universe = universe;
  fam.scales = anchor_scale_count(universe);
  fam.copies = copies;
  fam.seed = seed;
  Rng rng = substream(seed, "anchors");
  fam.sets.reserve(size_t(copies) * fam.scales);
  for (uint32_t c = 0; c < copies; ++c) {
    for (uint32_t i = 1; i <= fam.scales; ++i) {
      double p = std::ldexp(1.0, -int(i));  // 2^-i
      std::vector<uint32_t> set;
      do {
        set.clear();
        for (size_t v = 0; v < universe; ++v)
          if (rng.bernoulli(p)) set.push_back(uint32_t(v));
      } while (set.empty());
      fam.sets.push_back(std::move(set));
    }
  }
  return fam;
}

std::optional<AnchorHit> nearest_in_anchor(uint32_t v, const std::vector<uint32_t>& set,
                                           const TruncatedDistanceMap& dmap, uint32_t cutoff) {
  std::optional<AnchorHit> best;
  for (uint32_t u : set) {
    int d = dmap.distance(v, u);
    if (d < 0 || uint32_t(d) > cutoff) continue;
    if (!best || uint32_t(d) < best->dist) best = AnchorHit{u, uint32_t(d)};
    // set is sorted ascending, so the first node at each distance already has
    // the lowest index; strict < keeps it.
  }
  return best;
}

std::string anchors_to_json(const AnchorSetFamily& fam) {
  nlohmann::ordered_json j;
  j["universe"] = fam.universe;
  j["scales"] = fam.scales;
  j["copies"] = fam.copies;
  j["seed"] = fam.seed;
  j["sets"] = fam.sets;
  return j.dump();
}

AnchorSetFamily anchors_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  AnchorSetFamily fam;
  fam.universe = j.at("universe").get<size_t>();
  fam.scales = j.at("scales").get<uint32_t>();
  fam.copies = j.at("copies").get<uint32_t>();
  fam.seed = j.at("seed").get<uint64_t>();
  fam.sets = j.at("sets").get<std::vector<std::vector<uint32_t>>>();
  for (const auto& s : fam.sets)
    if (s.empty()) throw std::invalid_argument("anchor family has an empty set");
  return fam;
}

}  // namespace tmpgnn
