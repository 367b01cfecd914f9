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

#include "srmc/encode.h"

#include <algorithm>

#include "srmc/error.h"

namespace srmc {

GroupClusters cluster_group(const MulticastTree& tree,
                            const EncodingConfig& cfg) {
  GroupClusters c;
  c.leaf = cluster_p_rules(tree.leaf_layer, cfg.leaf, cfg.r,
                           cfg.inject_union_off_by_one);
  c.spine = cluster_p_rules(tree.spine_layer, cfg.spine, cfg.r,
                            cfg.inject_union_off_by_one);
  return c;
}

GroupEncoding resolve_overflow(GroupClusters&& clusters, SRuleLedger& ledger) {
  GroupEncoding enc;
  enc.leaf = assign_overflow(std::move(clusters.leaf), Layer::kLeaf, ledger);
  enc.spine = assign_overflow(std::move(clusters.spine), Layer::kSpine, ledger);
  return enc;
}

GroupEncoding encode_layers(const MulticastTree& tree,
                            const EncodingConfig& cfg, SRuleLedger& ledger) {
  return resolve_overflow(cluster_group(tree, cfg), ledger);
}

namespace {

void check_sender(const MulticastTree& tree, HostId source) {
  if (!std::binary_search(tree.senders.begin(), tree.senders.end(), source)) {
    throw InvalidArgument("host " + std::to_string(source) +
                          " is not a sender of group " +
                          std::to_string(tree.group));
  }
}

std::vector<PRule> downstream_section(const LayerEncoding& layer) {
  std::vector<PRule> rules;
  rules.reserve(layer.p_rules.size() + 1);
  for (const SharedRule& s : layer.p_rules) {
    rules.push_back({RuleKind::kDownstream, false, s.ids, s.bitmap});
  }
  if (layer.default_bitmap) {
    rules.push_back({RuleKind::kDefault, false, {}, *layer.default_bitmap});
  }
  return rules;
}

}  // namespace

UpstreamRules default_upstream(const Topology& topo, const MulticastTree& tree,
                               HostId source) {
  check_sender(tree, source);
  const Layer apex = sender_apex(topo, tree, source);
  const std::uint32_t sl = topo.leaf_of_host(source);
  const std::uint32_t sp = topo.pod_of_leaf(sl);
  const std::uint32_t hpl = topo.spec().hosts_per_leaf;
  const std::uint32_t lpp = topo.spec().leaves_per_pod;

  UpstreamRules up;
  up.leaf.kind = RuleKind::kUpstream;
  up.leaf.bitmap = PortBitmap(topo.port_count(Layer::kLeaf));
  for (HostId r : tree.receivers) {
    if (r != source && topo.leaf_of_host(r) == sl) {
      up.leaf.bitmap.set(topo.host_port(r));
    }
  }
  if (apex == Layer::kLeaf) return up;
  up.leaf.multipath = true;
  for (std::uint32_t j = 0; j < topo.upstream_width(Layer::kLeaf); ++j) {
    up.leaf.bitmap.set(hpl + j);
  }
  PRule spine;
  spine.kind = RuleKind::kUpstream;
  spine.bitmap = PortBitmap(topo.port_count(Layer::kSpine));
  for (HostId r : tree.receivers) {
    const std::uint32_t l = topo.leaf_of_host(r);
    if (l != sl && topo.pod_of_leaf(l) == sp) {
      spine.bitmap.set(topo.leaf_index_in_pod(l));
    }
  }
  if (apex == Layer::kCore) {
    spine.multipath = true;
    for (std::uint32_t u = 0; u < topo.upstream_width(Layer::kSpine); ++u) {
      spine.bitmap.set(lpp + u);
    }
  }
  up.spine = std::move(spine);
  return up;
}

PacketHeader build_header(const Topology& topo, const MulticastTree& tree,
                        const GroupEncoding& enc, HostId source,
                        const UpstreamRules* upstream) {
  check_sender(tree, source);
  const Layer apex = sender_apex(topo, tree, source);
  PacketHeader h;
  UpstreamRules up =
      upstream ? *upstream : default_upstream(topo, tree, source);
  h.at(Section::kUpstreamLeaf).push_back(std::move(up.leaf));
  if (apex == Layer::kLeaf) return h;
  if (!up.spine) throw InvalidArgument("missing upstream spine rule");
  h.at(Section::kUpstreamSpine).push_back(std::move(*up.spine));
  if (apex == Layer::kCore) {
    PRule core;
    core.kind = RuleKind::kCore;
    core.bitmap = PortBitmap(topo.num_pods());
    const std::uint32_t sp = topo.pod_of_host(source);
    for (HostId r : tree.receivers) {
      const std::uint32_t p = topo.pod_of_host(r);
      if (p != sp) core.bitmap.set(p);
    }
    h.at(Section::kCore).push_back(std::move(core));
    h.at(Section::kDownstreamSpine) = downstream_section(enc.spine);
  }
  h.at(Section::kDownstreamLeaf) = downstream_section(enc.leaf);
  return h;
}

std::vector<SRuleInstall> s_rule_installs(const Topology& topo,
                                          const GroupEncoding& enc) {
  std::vector<SRuleInstall> out;
  for (const SwitchBitmap& s : enc.leaf.s_rules) {
    out.push_back({{Layer::kLeaf, s.id}, s.bitmap});
  }
  for (const SwitchBitmap& s : enc.spine.s_rules) {
    for (std::uint32_t j = 0; j < topo.spec().spines_per_pod; ++j) {
      out.push_back({{Layer::kSpine, topo.spine(s.id, j)}, s.bitmap});
    }
  }
  return out;
}

EncodedGroup encode_group(const Topology& topo, const MulticastTree& tree,
                          const EncodingConfig& cfg, SRuleLedger& ledger,
                          HostId source) {
  EncodedGroup out;
  out.layers = encode_layers(tree, cfg, ledger);
  out.header = build_header(topo, tree, out.layers, source);
  out.installs = s_rule_installs(topo, out.layers);
  return out;
}

std::size_t logical_content_bits(const Topology& topo, const PacketHeader& h) {
  const LogicalTopology& lg = topo.logical();
  std::size_t bits = 0;
  for (std::size_t i = 0; i < kNumSections; ++i) {
    const auto s = static_cast<Section>(i);
    const std::uint32_t idw = s == Section::kDownstreamLeaf ? lg.leaf_id_bits
                                                            : lg.spine_id_bits;
    for (const PRule& r : h.at(s)) {
      switch (r.kind) {
        case RuleKind::kUpstream:
          bits += 2 + r.bitmap.width();
          break;
        case RuleKind::kCore:
        case RuleKind::kDefault:
          bits += 1 + r.bitmap.width();
          break;
        case RuleKind::kDownstream:
          bits += 1 + r.ids.size() * idw + r.bitmap.width();
          break;
      }
    }
  }
  return bits;
}

std::size_t physical_content_bits(const Topology& topo,
                                  const MulticastTree& tree, HostId source) {
  check_sender(tree, source);
  const Layer apex = sender_apex(topo, tree, source);
  const LogicalTopology& lg = topo.logical();
  std::vector<std::uint32_t> leaves{topo.leaf_of_host(source)};
  std::vector<std::uint32_t> pods{topo.pod_of_host(source)};
  for (HostId r : tree.receivers) {
    if (r == source) continue;
    leaves.push_back(topo.leaf_of_host(r));
    pods.push_back(topo.pod_of_host(r));
  }
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  std::sort(pods.begin(), pods.end());
  pods.erase(std::unique(pods.begin(), pods.end()), pods.end());

  std::size_t bits =
      leaves.size() * (2 + lg.leaf_id_bits + topo.port_count(Layer::kLeaf));
  if (apex == Layer::kLeaf) return bits;
  bits += pods.size() * topo.spec().spines_per_pod *
          (2 + lg.spine_id_bits + topo.port_count(Layer::kSpine));
  if (apex == Layer::kCore) {
    bits += topo.num_cores() *
            (2 + lg.core_id_bits + topo.port_count(Layer::kCore));
  }
  return bits;
}

std::uint32_t allocate_leaf_rules(const WireLayout& layout,
                                  std::uint32_t budget_bytes,
                                  const LayerLimits& spine,
                                  std::uint32_t leaf_k_max) {
  if (worst_case_header_bytes(layout, spine.h_max, spine.k_max, 0,
                              leaf_k_max) > budget_bytes) {
    throw InvalidArgument("header budget of " + std::to_string(budget_bytes) +
                          " bytes leaves no room for leaf p-rules");
  }
  std::uint32_t h = 0;
  while (h < 4096 && worst_case_header_bytes(layout, spine.h_max, spine.k_max,
                                             h + 1, leaf_k_max) <=
                         budget_bytes) {
    ++h;
  }
  return h;
}

EncodingConfig config_for_budget(const Topology& topo,
                                 std::uint32_t budget_bytes, std::uint32_t r,
                                 std::uint32_t leaf_k_max,
                                 std::uint32_t spine_k_max,
                                 std::uint32_t spine_rules) {
  EncodingConfig cfg;
  cfg.r = r;
  cfg.header_budget_bytes = budget_bytes;
  cfg.spine = {spine_rules, spine_k_max};
  const WireLayout layout =
      WireLayout::For(topo.logical(), leaf_k_max, spine_k_max);
  cfg.leaf = {allocate_leaf_rules(layout, budget_bytes, cfg.spine, leaf_k_max),
              leaf_k_max};
  return cfg;
}

}  // namespace srmc
