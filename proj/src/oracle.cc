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

#include "srmc/oracle.h"

#include <algorithm>
#include <set>

namespace srmc {
namespace {

// Bitmap a downstream switch applies, or nullptr when it drops.
const PortBitmap* applied(const LayerEncoding& l, std::uint32_t id) {
  for (const SharedRule& r : l.p_rules) {
    if (std::binary_search(r.ids.begin(), r.ids.end(), id)) return &r.bitmap;
  }
  for (const SwitchBitmap& s : l.s_rules) {
    if (s.id == id) return &s.bitmap;
  }
  if (l.default_bitmap) return &*l.default_bitmap;
  return nullptr;
}

}  // namespace

std::vector<HostId> expected_receivers(const MulticastTree& tree,
                                       HostId source) {
  std::vector<HostId> out;
  for (HostId r : tree.receivers) {
    if (r != source) out.push_back(r);
  }
  return out;
}

std::vector<HostId> reference_delivery(const Topology& topo,
                                       const MulticastTree& tree,
                                       const GroupEncoding& enc,
                                       HostId source) {
  const std::uint32_t hpl = topo.spec().hosts_per_leaf;
  const std::uint32_t lpp = topo.spec().leaves_per_pod;
  const std::uint32_t sl = topo.leaf_of_host(source);
  const std::uint32_t sp = topo.pod_of_leaf(sl);

  std::set<HostId> out;
  std::set<std::uint32_t> rx_leaves, rx_pods;
  for (HostId r : tree.receivers) {
    if (r == source) continue;
    const std::uint32_t l = topo.leaf_of_host(r);
    if (l == sl) {
      out.insert(r);
    } else {
      rx_leaves.insert(l);
      rx_pods.insert(topo.pod_of_leaf(l));
    }
  }

  // Leaves reached from above.
  std::set<std::uint32_t> reached;
  for (std::uint32_t l : rx_leaves) {
    if (topo.pod_of_leaf(l) == sp) reached.insert(l);
  }
  for (std::uint32_t p : rx_pods) {
    if (p == sp) continue;
    const PortBitmap* b = applied(enc.spine, p);
    if (!b) continue;
    for (std::uint32_t i = 0; i < lpp; ++i) {
      if (b->test(i)) reached.insert(p * lpp + i);
    }
  }
  for (std::uint32_t l : reached) {
    const PortBitmap* b = applied(enc.leaf, l);
    if (!b) continue;
    for (std::uint32_t port = 0; port < hpl; ++port) {
      if (b->test(port)) out.insert(l * hpl + port);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace srmc
