// Copyright 2026 The srmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRMC_CLUSTER_H_
#define SRMC_CLUSTER_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "srmc/multicast_tree.h"
#include "srmc/topology.h"

namespace srmc {

inline constexpr std::uint32_t kUnbounded =
    std::numeric_limits<std::uint32_t>::max();

struct LayerLimits {
  std::uint32_t h_max = 0;  // p-rules per layer
  std::uint32_t k_max = 1;  // switches per p-rule

  friend bool operator==(const LayerLimits&, const LayerLimits&) = default;
};

struct EncodingConfig {
  // Bound on the spurious bits of one shared p-rule.
  std::uint32_t r = 0;
  LayerLimits leaf{30, 2};
  LayerLimits spine{2, 4};
  // s-rule capacity per switch.
  std::uint32_t f_max = kUnbounded;
  std::uint32_t header_budget_bytes = 325;
  // Mutation hook for the verification harness: the shared bitmap is
  // computed without its last member.
  bool inject_union_off_by_one = false;

  void validate() const;
};

struct SharedRule {
  std::vector<std::uint32_t> ids;  // ascending
  PortBitmap bitmap;

  friend bool operator==(const SharedRule&, const SharedRule&) = default;
};

struct LayerEncoding {
  std::vector<SharedRule> p_rules;
  std::vector<SwitchBitmap> s_rules;
  std::vector<std::uint32_t> default_ids;
  std::optional<PortBitmap> default_bitmap;

  bool uses_fallback() const {
    return !s_rules.empty() || default_bitmap.has_value();
  }
  std::size_t num_switches() const;

  friend bool operator==(const LayerEncoding&, const LayerEncoding&) = default;
};

// First phase of the clustering: the p-rules and the switches left over
// once the rule budget is spent. Pure; safe to run in parallel.
struct LayerClusters {
  std::vector<SharedRule> p_rules;
  std::vector<SwitchBitmap> leftovers;  // ascending id
};

LayerClusters cluster_p_rules(std::span<const SwitchBitmap> inputs,
                              const LayerLimits& limits, std::uint32_t r,
                              bool inject_union_off_by_one = false);

// s-rule occupancy per logical switch. Spine entries count once per pod.
class SRuleLedger {
 public:
  SRuleLedger() = default;
  SRuleLedger(std::uint32_t num_leaves, std::uint32_t num_pods,
              std::uint32_t f_max);
  explicit SRuleLedger(const Topology& topo, std::uint32_t f_max)
      : SRuleLedger(topo.num_leaves(), topo.num_pods(), f_max) {}

  // Reserves a slot if the switch is below capacity.
  bool try_reserve(Layer layer, std::uint32_t id);
  void release(Layer layer, std::uint32_t id);
  std::uint32_t occupancy(Layer layer, std::uint32_t id) const;
  std::uint32_t f_max() const { return f_max_; }
  std::span<const std::uint32_t> leaf_occupancy() const { return leaf_; }
  std::span<const std::uint32_t> spine_occupancy() const { return spine_; }

 private:
  std::vector<std::uint32_t>& table(Layer layer);
  const std::vector<std::uint32_t>& table(Layer layer) const;

  std::uint32_t f_max_ = kUnbounded;
  std::vector<std::uint32_t> leaf_;
  std::vector<std::uint32_t> spine_;
};

// Second phase: leftovers take an s-rule while the switch has room, the rest
// share the default p-rule.
LayerEncoding assign_overflow(LayerClusters&& clusters, Layer layer,
                              SRuleLedger& ledger);

LayerEncoding cluster_layer(std::span<const SwitchBitmap> inputs,
                            const LayerLimits& limits, std::uint32_t r,
                            Layer layer, SRuleLedger& ledger);

}  // namespace srmc

#endif  // SRMC_CLUSTER_H_
