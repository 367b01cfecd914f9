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

#include "srmc/multicast_tree.h"

#include <algorithm>

#include "srmc/error.h"

namespace srmc {

MulticastTree compute_tree(const Topology& topo, std::uint32_t group,
                           std::span<const HostMember> members) {
  MulticastTree t;
  t.group = group;
  t.members.assign(members.begin(), members.end());
  std::sort(t.members.begin(), t.members.end(),
            [](const HostMember& a, const HostMember& b) {
              return a.host < b.host;
            });
  for (std::size_t i = 0; i < t.members.size(); ++i) {
    const HostMember& m = t.members[i];
    if (m.host >= topo.num_hosts()) {
      throw InvalidArgument("member on unknown host " +
                            std::to_string(m.host));
    }
    if (i > 0 && t.members[i - 1].host == m.host) {
      throw InvalidArgument("two members on host " + std::to_string(m.host));
    }
    if (can_send(m.role)) t.senders.push_back(m.host);
    if (can_receive(m.role)) t.receivers.push_back(m.host);
  }

  // Apex over every member.
  t.apex = Layer::kLeaf;
  if (!t.members.empty()) {
    const std::uint32_t leaf0 = topo.leaf_of_host(t.members.front().host);
    const std::uint32_t pod0 = topo.pod_of_leaf(leaf0);
    for (const HostMember& m : t.members) {
      const std::uint32_t l = topo.leaf_of_host(m.host);
      if (topo.pod_of_leaf(l) != pod0) {
        t.apex = Layer::kCore;
        break;
      }
      if (l != leaf0) t.apex = Layer::kSpine;
    }
  }
  if (t.receivers.empty() || t.senders.empty()) return t;

  const std::uint32_t first_sender_leaf = topo.leaf_of_host(t.senders.front());
  const bool single_sender_leaf = std::all_of(
      t.senders.begin(), t.senders.end(), [&](HostId s) {
        return topo.leaf_of_host(s) == first_sender_leaf;
      });
  const std::uint32_t first_sender_pod = topo.pod_of_leaf(first_sender_leaf);
  const bool single_sender_pod = std::all_of(
      t.senders.begin(), t.senders.end(),
      [&](HostId s) { return topo.pod_of_host(s) == first_sender_pod; });

  const std::uint32_t hpl = topo.spec().hosts_per_leaf;
  const std::uint32_t lpp = topo.spec().leaves_per_pod;
  for (HostId r : t.receivers) {
    const std::uint32_t l = topo.leaf_of_host(r);
    if (single_sender_leaf && l == first_sender_leaf) continue;
    if (t.leaf_layer.empty() || t.leaf_layer.back().id != l) {
      t.leaf_layer.push_back({l, PortBitmap(hpl)});
    }
    t.leaf_layer.back().bitmap.set(topo.host_port(r));
  }
  for (HostId r : t.receivers) {
    const std::uint32_t l = topo.leaf_of_host(r);
    const std::uint32_t p = topo.pod_of_leaf(l);
    if (single_sender_pod && p == first_sender_pod) continue;
    if (t.spine_layer.empty() || t.spine_layer.back().id != p) {
      t.spine_layer.push_back({p, PortBitmap(lpp)});
    }
    t.spine_layer.back().bitmap.set(topo.leaf_index_in_pod(l));
  }
  return t;
}

MulticastTree compute_tree(const Topology& topo, const Placement& placement,
                           const GroupSpec& group) {
  std::vector<HostMember> members;
  members.reserve(group.members.size());
  for (const Member& m : group.members) {
    if (m.vm >= placement.num_vms()) {
      throw InvalidArgument("unplaced vm " + std::to_string(m.vm));
    }
    members.push_back({placement.host_of(m.vm), m.role});
  }
  return compute_tree(topo, group.id, members);
}

Layer sender_apex(const Topology& topo, const MulticastTree& tree,
                  HostId source) {
  const std::uint32_t sl = topo.leaf_of_host(source);
  const std::uint32_t sp = topo.pod_of_leaf(sl);
  Layer apex = Layer::kLeaf;
  for (HostId r : tree.receivers) {
    const std::uint32_t l = topo.leaf_of_host(r);
    if (topo.pod_of_leaf(l) != sp) return Layer::kCore;
    if (l != sl) apex = Layer::kSpine;
  }
  return apex;
}

}  // namespace srmc
