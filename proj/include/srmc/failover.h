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

#ifndef SRMC_FAILOVER_H_
#define SRMC_FAILOVER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "srmc/encode.h"
#include "srmc/multicast_tree.h"
#include "srmc/topology.h"

namespace srmc {

// Failed spine and core switches.
class FailureSet {
 public:
  FailureSet() = default;
  explicit FailureSet(const Topology& topo)
      : spine_(topo.num_spines(), 0), core_(topo.num_cores(), 0) {}

  // Throws for unknown switches and for leaves.
  void fail(SwitchRef s);
  bool failed(SwitchRef s) const;
  bool spine_failed(std::uint32_t s) const {
    return !spine_.empty() && spine_[s];
  }
  bool core_failed(std::uint32_t c) const { return !core_.empty() && core_[c]; }
  bool any() const { return count_ > 0; }
  std::vector<SwitchRef> list() const;

 private:
  std::vector<std::uint8_t> spine_;
  std::vector<std::uint8_t> core_;
  std::size_t count_ = 0;
};

// Greedy set cover over a universe of n elements: repeatedly picks the
// candidate covering the most uncovered elements (ties: lower index) until
// nothing more can be covered. Returns the picks in order; `uncovered`
// receives what no candidate covers.
std::vector<std::size_t> greedy_set_cover(
    std::span<const std::vector<bool>> candidates, std::size_t n,
    std::vector<std::size_t>* uncovered = nullptr);

struct FailoverResult {
  UpstreamRules rules;
  // True when the default multipath rules still reach every receiver.
  bool multipath_kept = true;
  std::vector<HostId> unreachable;
};

// Upstream rules for `source` under `failures`. Keeps the multipath flag
// when every live uplink the multipath scheme may pick reaches all
// receivers; otherwise clears it and sets the uplinks chosen by greedy set
// cover over what each live uplink can still reach.
FailoverResult compute_upstream_failover(const Topology& topo,
                                         const MulticastTree& tree,
                                         HostId source,
                                         const FailureSet& failures);

// Same computation with the per-group work done once, for groups with many
// senders. Receivers of one pod are reachable through exactly the same
// uplinks, so the cover runs over pods weighted by receiver count.
class FailoverPlanner {
 public:
  FailoverPlanner(const Topology& topo, const MulticastTree& tree,
                  const FailureSet& failures);

  FailoverResult plan(HostId source) const;
  // Only the decision, without building rules.
  bool multipath_kept(HostId source) const;

 private:
  struct Choice {
    bool kept = true;
    std::vector<std::uint32_t> planes;
    std::vector<std::uint32_t> unreachable_pods;
  };
  Choice choose(HostId source) const;

  const Topology& topo_;
  const MulticastTree& tree_;
  const FailureSet& failures_;
  std::vector<std::uint32_t> rx_pods_;        // pods with receivers
  std::vector<std::uint64_t> rx_pod_count_;   // receivers per rx_pods_ entry
  std::vector<std::uint8_t> plane_core_up_;   // plane has a live core
};

}  // namespace srmc

#endif  // SRMC_FAILOVER_H_
