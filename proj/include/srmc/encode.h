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

#ifndef SRMC_ENCODE_H_
#define SRMC_ENCODE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "srmc/cluster.h"
#include "srmc/header.h"
#include "srmc/multicast_tree.h"
#include "srmc/topology.h"
#include "srmc/wire.h"

namespace srmc {

struct GroupEncoding {
  LayerEncoding leaf;
  LayerEncoding spine;

  // Every downstream switch is served by a non-default p-rule.
  bool covered() const {
    return !leaf.uses_fallback() && !spine.uses_fallback();
  }

  friend bool operator==(const GroupEncoding&, const GroupEncoding&) = default;
};

struct GroupClusters {
  LayerClusters leaf;
  LayerClusters spine;
};

// p-rule clustering for both downstream layers. Pure.
GroupClusters cluster_group(const MulticastTree& tree,
                            const EncodingConfig& cfg);

// s-rule and default assignment against the shared occupancy ledger.
GroupEncoding resolve_overflow(GroupClusters&& clusters, SRuleLedger& ledger);

GroupEncoding encode_layers(const MulticastTree& tree,
                            const EncodingConfig& cfg, SRuleLedger& ledger);

// Replacement upstream rules, used after failures.
struct UpstreamRules {
  PRule leaf;
  std::optional<PRule> spine;

  friend bool operator==(const UpstreamRules&, const UpstreamRules&) = default;
};

// Default upstream rules of `source`: local receivers plus, when the packet
// must leave the leaf (or pod), every uplink with the multipath flag set.
UpstreamRules default_upstream(const Topology& topo, const MulticastTree& tree,
                               HostId source);

// Header pushed by the hypervisor of `source`. Sections above the source's
// apex are absent.
PacketHeader build_header(const Topology& topo, const MulticastTree& tree,
                        const GroupEncoding& enc, HostId source,
                        const UpstreamRules* upstream = nullptr);

// s-rule entries implied by an encoding: physical switch and bitmap. Spine
// layer entries are replicated on every spine of the pod.
struct SRuleInstall {
  SwitchRef sw;
  PortBitmap bitmap;

  friend bool operator==(const SRuleInstall&, const SRuleInstall&) = default;
};
std::vector<SRuleInstall> s_rule_installs(const Topology& topo,
                                          const GroupEncoding& enc);

// Header plus s-rule installs for one sender.
struct EncodedGroup {
  GroupEncoding layers;
  PacketHeader header;
  std::vector<SRuleInstall> installs;
};
EncodedGroup encode_group(const Topology& topo, const MulticastTree& tree,
                          const EncodingConfig& cfg, SRuleLedger& ledger,
                          HostId source);

// Content bits of a header on the logical topology, before any wire
// framing: upstream rule = 2 flags + bitmap, core rule = 1 flag + bitmap,
// downstream rule = 1 flag + ids + bitmap, default = 1 flag + bitmap.
std::size_t logical_content_bits(const Topology& topo, const PacketHeader& h);

// Content bits with one p-rule per physical switch on the source's paths:
// 2 flags + switch id + full port bitmap each.
std::size_t physical_content_bits(const Topology& topo,
                                  const MulticastTree& tree, HostId source);

// Largest leaf-layer rule budget that keeps the worst-case header within
// `budget_bytes` given the spine budget. Throws if even zero leaf rules do
// not fit.
std::uint32_t allocate_leaf_rules(const WireLayout& layout,
                                  std::uint32_t budget_bytes,
                                  const LayerLimits& spine,
                                  std::uint32_t leaf_k_max);

// Encoding config for a byte budget: 2 spine rules, the rest to leaves.
EncodingConfig config_for_budget(const Topology& topo,
                                 std::uint32_t budget_bytes, std::uint32_t r,
                                 std::uint32_t leaf_k_max = 2,
                                 std::uint32_t spine_k_max = 4,
                                 std::uint32_t spine_rules = 2);

}  // namespace srmc

#endif  // SRMC_ENCODE_H_
