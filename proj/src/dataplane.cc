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

#include "srmc/dataplane.h"

#include <algorithm>
#include <deque>
#include <set>

#include "srmc/error.h"
#include "srmc/rng.h"

namespace srmc {

SRuleTables::SRuleTables(const Topology& topo, std::uint32_t f_max)
    : f_max_(f_max), leaf_(topo.num_leaves()), spine_(topo.num_spines()) {}

SRuleTables::Table& SRuleTables::table(SwitchRef sw) {
  if (sw.layer == Layer::kLeaf && sw.index < leaf_.size()) {
    return leaf_[sw.index];
  }
  if (sw.layer == Layer::kSpine && sw.index < spine_.size()) {
    return spine_[sw.index];
  }
  throw InvalidArgument("no group table on " + switch_name(sw));
}

const SRuleTables::Table* SRuleTables::find_table(SwitchRef sw) const {
  if (sw.layer == Layer::kLeaf && sw.index < leaf_.size()) {
    return &leaf_[sw.index];
  }
  if (sw.layer == Layer::kSpine && sw.index < spine_.size()) {
    return &spine_[sw.index];
  }
  return nullptr;
}

void SRuleTables::install(SwitchRef sw, std::uint32_t group,
                          const PortBitmap& bitmap) {
  Table& t = table(sw);
  auto it = t.find(group);
  if (it != t.end()) {
    it->second = bitmap;
    return;
  }
  if (t.size() >= f_max_) {
    throw InvariantViolation("group table of " + switch_name(sw) +
                             " is full");
  }
  t.emplace(group, bitmap);
}

bool SRuleTables::remove(SwitchRef sw, std::uint32_t group) {
  return table(sw).erase(group) > 0;
}

const PortBitmap* SRuleTables::lookup(SwitchRef sw,
                                      std::uint32_t group) const {
  const Table* t = find_table(sw);
  if (!t) return nullptr;
  auto it = t->find(group);
  return it == t->end() ? nullptr : &it->second;
}

std::size_t SRuleTables::size(SwitchRef sw) const {
  const Table* t = find_table(sw);
  return t ? t->size() : 0;
}

GroupSRules::GroupSRules(const Topology& topo, const GroupEncoding& enc,
                         std::uint32_t group)
    : group_(group), installs_(s_rule_installs(topo, enc)) {}

const PortBitmap* GroupSRules::lookup(SwitchRef sw,
                                      std::uint32_t group) const {
  if (group != group_) return nullptr;
  for (const auto& i : installs_) {
    if (i.sw == sw) return &i.bitmap;
  }
  return nullptr;
}

namespace {

bool is_failed(const ForwardContext& ctx, SwitchRef sw) {
  return ctx.failures && ctx.failures->failed(sw);
}

// Upstream neighbour of `sw` through upstream port `u`.
SwitchRef up_neighbor(const Topology& topo, SwitchRef sw, std::uint32_t u) {
  if (sw.layer == Layer::kLeaf) {
    return {Layer::kSpine, topo.spine(topo.pod_of_leaf(sw.index), u)};
  }
  return {Layer::kCore, topo.core(topo.spine_plane(sw.index), u)};
}

SwitchRef down_neighbor(const Topology& topo, SwitchRef sw, std::uint32_t d) {
  switch (sw.layer) {
    case Layer::kLeaf:
      return {Layer::kHost, topo.host(sw.index, d)};
    case Layer::kSpine:
      return {Layer::kLeaf, topo.leaf(topo.spine_pod(sw.index), d)};
    case Layer::kCore:
      return {Layer::kSpine, topo.spine(d, topo.core_plane(sw.index))};
    case Layer::kHost:
      break;
  }
  throw InvalidArgument("hosts have no downstream ports");
}

void split_ports(const PortBitmap& bitmap, std::uint32_t down_width,
                 ForwardResult& out, std::vector<std::uint32_t>* up) {
  bitmap.for_each_set([&](std::size_t i) {
    if (i < down_width) {
      out.down_ports.push_back(static_cast<std::uint32_t>(i));
    } else if (up) {
      up->push_back(static_cast<std::uint32_t>(i - down_width));
    }
  });
}

std::vector<std::uint8_t> pop_if_present(std::span<const std::uint8_t> header,
                                         const WireLayout& layout,
                                         Section through) {
  const std::uint32_t mask = present_sections(header);
  const std::uint32_t below = (1u << (static_cast<unsigned>(through) + 1)) - 1;
  if (!(mask & below)) return {header.begin(), header.end()};
  return pop_layers(header, layout, through);
}

}  // namespace

ForwardResult forward_at_switch(const ForwardContext& ctx, SwitchRef sw,
                                Arrival arrival,
                                std::span<const std::uint8_t> header) {
  const Topology& topo = *ctx.topo;
  const WireLayout& layout = *ctx.layout;
  topo.check(sw);
  if (sw.layer == Layer::kHost) {
    throw InvalidArgument("forward_at_switch on a host");
  }
  ForwardResult out;
  const std::uint32_t dw = topo.downstream_width(sw.layer);

  if (arrival == Arrival::kFromBelow) {
    const Section sec = sw.layer == Layer::kLeaf    ? Section::kUpstreamLeaf
                        : sw.layer == Layer::kSpine ? Section::kUpstreamSpine
                                                    : Section::kCore;
    const MatchResult m = parse_for_switch(header, layout, sec, sw.index);
    out.bits_scanned = m.bits_scanned;
    if (m.kind == MatchResult::Kind::kNoRule) return out;
    out.source = ForwardResult::Source::kPRule;
    std::vector<std::uint32_t> up;
    split_ports(m.bitmap, dw, out, &up);
    std::vector<std::uint32_t> live;
    for (std::uint32_t u : up) {
      if (!is_failed(ctx, up_neighbor(topo, sw, u))) live.push_back(u);
    }
    if (m.multipath && !live.empty()) {
      const std::uint64_t h = mix_seed(
          ctx.group, ctx.source,
          (static_cast<std::uint64_t>(sw.layer) << 32) | sw.index);
      out.up_ports.push_back(live[h % live.size()]);
    } else {
      out.up_ports = std::move(live);
    }
    switch (sw.layer) {
      case Layer::kLeaf:
        if (!out.up_ports.empty()) {
          out.up_header = pop_layers(header, layout, Section::kUpstreamLeaf);
        }
        break;
      case Layer::kSpine:
        if (!out.down_ports.empty()) {
          out.down_header =
              pop_if_present(header, layout, Section::kDownstreamSpine);
        }
        if (!out.up_ports.empty()) {
          out.up_header = pop_layers(header, layout, Section::kUpstreamSpine);
        }
        break;
      case Layer::kCore:
        out.down_header = pop_layers(header, layout, Section::kCore);
        break;
      case Layer::kHost:
        break;
    }
    return out;
  }

  if (sw.layer == Layer::kCore) {
    throw InvalidArgument("packet arriving at a core from above");
  }
  const bool leaf = sw.layer == Layer::kLeaf;
  const Section sec = leaf ? Section::kDownstreamLeaf : Section::kDownstreamSpine;
  const std::uint32_t logical_id = leaf ? sw.index : topo.spine_pod(sw.index);
  const MatchResult m = parse_for_switch(header, layout, sec, logical_id);
  out.bits_scanned = m.bits_scanned;
  const PortBitmap* bitmap = nullptr;
  if (m.kind == MatchResult::Kind::kMatched) {
    out.source = ForwardResult::Source::kPRule;
    bitmap = &m.bitmap;
  } else if (const PortBitmap* s =
                 ctx.s_rules ? ctx.s_rules->lookup(sw, ctx.group) : nullptr) {
    out.source = ForwardResult::Source::kSRule;
    bitmap = s;
  } else if (m.kind == MatchResult::Kind::kDefault) {
    out.source = ForwardResult::Source::kDefault;
    bitmap = &m.bitmap;
  } else {
    return out;
  }
  split_ports(*bitmap, dw, out, nullptr);
  if (!leaf && !out.down_ports.empty()) {
    out.down_header = pop_if_present(header, layout, Section::kDownstreamSpine);
  }
  return out;
}

DeliveryReport simulate_packet(const ForwardContext& ctx,
                               std::span<const std::uint8_t> header,
                               std::span<const HostId> receivers) {
  const Topology& topo = *ctx.topo;
  DeliveryReport rep;
  struct Hop {
    SwitchRef sw;
    Arrival arrival;
    std::vector<std::uint8_t> header;
  };
  std::vector<HostId> expected;
  for (HostId r : receivers) {
    if (r != ctx.source) expected.push_back(r);
  }
  // Nobody else to reach: the hypervisor keeps the packet.
  if (expected.empty()) return rep;

  std::deque<Hop> queue;
  std::vector<HostId> hits;
  std::set<std::pair<SwitchRef, Arrival>> seen;

  const SwitchRef first{Layer::kLeaf, topo.leaf_of_host(ctx.source)};
  ++rep.link_packets;
  rep.header_bytes += header.size();
  queue.push_back({first, Arrival::kFromBelow, {header.begin(), header.end()}});

  while (!queue.empty()) {
    Hop hop = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert({hop.sw, hop.arrival}).second) ++rep.revisits;
    if (ctx.failures && ctx.failures->failed(hop.sw)) {
      ++rep.drops;
      continue;
    }
    ForwardResult fr = forward_at_switch(ctx, hop.sw, hop.arrival, hop.header);
    rep.max_bits_scanned = std::max(rep.max_bits_scanned, fr.bits_scanned);
    if (fr.source == ForwardResult::Source::kDrop) {
      ++rep.drops;
      continue;
    }
    for (std::uint32_t d : fr.down_ports) {
      const SwitchRef next = down_neighbor(topo, hop.sw, d);
      ++rep.link_packets;
      if (next.layer == Layer::kHost) {
        hits.push_back(next.index);
        continue;
      }
      rep.header_bytes += fr.down_header.size();
      queue.push_back({next, Arrival::kFromAbove, fr.down_header});
    }
    for (std::uint32_t u : fr.up_ports) {
      ++rep.link_packets;
      rep.header_bytes += fr.up_header.size();
      queue.push_back(
          {up_neighbor(topo, hop.sw, u), Arrival::kFromBelow, fr.up_header});
    }
  }

  std::sort(hits.begin(), hits.end());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i > 0 && hits[i] == hits[i - 1]) {
      if (rep.duplicates.empty() || rep.duplicates.back() != hits[i]) {
        rep.duplicates.push_back(hits[i]);
      }
      continue;
    }
    rep.delivered.push_back(hits[i]);
  }
  std::set_difference(rep.delivered.begin(), rep.delivered.end(),
                      expected.begin(), expected.end(),
                      std::back_inserter(rep.spurious));
  std::set_difference(expected.begin(), expected.end(),
                      rep.delivered.begin(), rep.delivered.end(),
                      std::back_inserter(rep.missing));
  return rep;
}

DeliveryReport simulate_group(const Topology& topo, const MulticastTree& tree,
                              const GroupEncoding& enc,
                              const SRuleSource& s_rules,
                              const WireLayout& layout, HostId source,
                              const FailureSet* failures,
                              const UpstreamRules* upstream) {
  const PacketHeader h = build_header(topo, tree, enc, source, upstream);
  const auto bytes = encode_header(h, layout);
  ForwardContext ctx{&topo, &layout, &s_rules, failures, tree.group, source};
  return simulate_packet(ctx, bytes, tree.receivers);
}

std::uint64_t baseline_packets(const Topology& topo, const MulticastTree& tree,
                               HostId source, Baseline mode) {
  const std::uint32_t sl = topo.leaf_of_host(source);
  const std::uint32_t sp = topo.pod_of_leaf(sl);
  std::vector<HostId> rx;
  for (HostId r : tree.receivers) {
    if (r != source) rx.push_back(r);
  }
  if (rx.empty()) return 0;
  switch (mode) {
    case Baseline::kUnicast: {
      std::uint64_t n = 0;
      for (HostId r : rx) n += topo.hops(source, r);
      return n;
    }
    case Baseline::kOverlay: {
      // One copy per receiver leaf to its first receiver, which relays to
      // the other receivers on that leaf. The source serves its own leaf.
      std::uint64_t n = 0;
      for (std::size_t i = 0; i < rx.size();) {
        const std::uint32_t l = topo.leaf_of_host(rx[i]);
        std::size_t j = i;
        while (j < rx.size() && topo.leaf_of_host(rx[j]) == l) ++j;
        const std::uint64_t k = j - i;
        n += l == sl ? 2 * k : topo.hops(source, rx[i]) + 2 * (k - 1);
        i = j;
      }
      return n;
    }
    case Baseline::kIdeal: {
      std::uint64_t n = 1 + rx.size();  // host->leaf, leaf->hosts
      std::vector<std::uint32_t> leaves, pods;
      for (HostId r : rx) {
        const std::uint32_t l = topo.leaf_of_host(r);
        if (l != sl && (leaves.empty() || leaves.back() != l)) {
          leaves.push_back(l);
        }
      }
      if (leaves.empty()) return n;
      n += 1 + leaves.size();  // leaf->spine, spine->leaf
      for (std::uint32_t l : leaves) {
        const std::uint32_t p = topo.pod_of_leaf(l);
        if (p != sp && (pods.empty() || pods.back() != p)) pods.push_back(p);
      }
      if (!pods.empty()) n += 1 + pods.size();  // spine->core, core->spine
      return n;
    }
  }
  return 0;
}

}  // namespace srmc
