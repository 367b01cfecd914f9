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

#ifndef SRMC_MULTICAST_TREE_H_
#define SRMC_MULTICAST_TREE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "srmc/placement.h"
#include "srmc/port_bitmap.h"
#include "srmc/topology.h"
#include "srmc/workload.h"

namespace srmc {

struct HostMember {
  HostId host = 0;
  Role role = Role::kBoth;
};

// A logical switch and its downstream-only input bitmap.
struct SwitchBitmap {
  std::uint32_t id = 0;
  PortBitmap bitmap;

  friend bool operator==(const SwitchBitmap&, const SwitchBitmap&) = default;
};

struct MulticastTree {
  std::uint32_t group = 0;
  // Highest layer any packet of the group must reach.
  Layer apex = Layer::kLeaf;
  std::vector<HostMember> members;  // sorted by host
  std::vector<HostId> senders;      // sorted
  std::vector<HostId> receivers;    // sorted
  // Downstream leaf layer: receiver leaves that some sender reaches from
  // above. Sorted by leaf id; bitmaps over host ports.
  std::vector<SwitchBitmap> leaf_layer;
  // Downstream spine layer: receiver pods that some sender reaches through
  // the core. Keyed by pod; bitmaps over leaves of the pod.
  std::vector<SwitchBitmap> spine_layer;

  bool has_receivers() const { return !receivers.empty(); }
};

MulticastTree compute_tree(const Topology& topo, std::uint32_t group,
                           std::span<const HostMember> members);

MulticastTree compute_tree(const Topology& topo, const Placement& placement,
                           const GroupSpec& group);

// Highest layer the packets of `source` must climb to reach every receiver.
Layer sender_apex(const Topology& topo, const MulticastTree& tree,
                  HostId source);

}  // namespace srmc

#endif  // SRMC_MULTICAST_TREE_H_
