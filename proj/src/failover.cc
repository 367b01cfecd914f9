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

#include "srmc/failover.h"

#include <algorithm>

#include "srmc/error.h"

namespace srmc {

void FailureSet::fail(SwitchRef s) {
  if (s.layer == Layer::kSpine && s.index < spine_.size()) {
    count_ += spine_[s.index] ? 0 : 1;
    spine_[s.index] = 1;
  } else if (s.layer == Layer::kCore && s.index < core_.size()) {
    count_ += core_[s.index] ? 0 : 1;
    core_[s.index] = 1;
  } else {
    throw InvalidArgument("cannot fail " + switch_name(s) +
                          ": only existing spines and cores can fail");
  }
}

bool FailureSet::failed(SwitchRef s) const {
  if (s.layer == Layer::kSpine) return spine_failed(s.index);
  if (s.layer == Layer::kCore) return core_failed(s.index);
  return false;
}

std::vector<SwitchRef> FailureSet::list() const {
  std::vector<SwitchRef> out;
  for (std::uint32_t i = 0; i < spine_.size(); ++i) {
    if (spine_[i]) out.push_back({Layer::kSpine, i});
  }
  for (std::uint32_t i = 0; i < core_.size(); ++i) {
    if (core_[i]) out.push_back({Layer::kCore, i});
  }
  return out;
}

std::vector<std::size_t> greedy_set_cover(
    std::span<const std::vector<bool>> candidates, std::size_t n,
    std::vector<std::size_t>* uncovered) {
  std::vector<bool> covered(n, false);
  std::vector<bool> used(candidates.size(), false);
  std::vector<std::size_t> picks;
  while (true) {
    std::size_t best = candidates.size(), best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      std::size_t gain = 0;
      for (std::size_t e = 0; e < n; ++e) {
        if (candidates[c][e] && !covered[e]) ++gain;
      }
      if (gain > best_gain) {
        best = c;
        best_gain = gain;
      }
    }
    if (best == candidates.size()) break;
    used[best] = true;
    picks.push_back(best);
    for (std::size_t e = 0; e < n; ++e) {
      if (candidates[best][e]) covered[e] = true;
    }
  }
  if (uncovered) {
    uncovered->clear();
    for (std::size_t e = 0; e < n; ++e) {
      if (!covered[e]) uncovered->push_back(e);
    }
  }
  return picks;
}

FailoverPlanner::FailoverPlanner(const Topology& topo,
                                 const MulticastTree& tree,
                                 const FailureSet& failures)
    : topo_(topo), tree_(tree), failures_(failures) {
  for (HostId r : tree.receivers) {
    const std::uint32_t p = topo.pod_of_host(r);
    if (rx_pods_.empty() || rx_pods_.back() != p) {
      rx_pods_.push_back(p);
      rx_pod_count_.push_back(0);
    }
    ++rx_pod_count_.back();
  }
  const std::uint32_t planes = topo.spec().spines_per_pod;
  plane_core_up_.assign(planes, 0);
  for (std::uint32_t j = 0; j < planes; ++j) {
    for (std::uint32_t u = 0; u < topo.cores_per_plane(); ++u) {
      if (!failures.core_failed(topo.core(j, u))) plane_core_up_[j] = 1;
    }
  }
}

FailoverPlanner::Choice FailoverPlanner::choose(HostId source) const {
  Choice c;
  const Layer apex = sender_apex(topo_, tree_, source);
  if (apex == Layer::kLeaf || !failures_.any()) return c;
  const std::uint32_t sp = topo_.pod_of_host(source);
  const std::uint32_t planes = topo_.spec().spines_per_pod;

  // Remote pods that need the core; receivers in the source pod are
  // reachable through any live uplink.
  std::vector<std::size_t> remote;
  if (apex == Layer::kCore) {
    for (std::size_t i = 0; i < rx_pods_.size(); ++i) {
      if (rx_pods_[i] != sp) remote.push_back(i);
    }
  }
  auto reaches = [&](std::uint32_t j, std::size_t i) {
    return plane_core_up_[j] &&
           !failures_.spine_failed(topo_.spine(rx_pods_[i], j));
  };
  std::vector<std::uint32_t> live;
  for (std::uint32_t j = 0; j < planes; ++j) {
    if (!failures_.spine_failed(topo_.spine(sp, j))) live.push_back(j);
  }
  bool all_full = !live.empty();
  for (std::uint32_t j : live) {
    for (std::size_t i : remote) {
      if (!reaches(j, i)) all_full = false;
    }
  }
  if (all_full) return c;

  c.kept = false;
  if (live.empty()) {
    for (std::size_t i = 0; i < rx_pods_.size(); ++i) {
      c.unreachable_pods.push_back(rx_pods_[i]);
    }
    return c;
  }
  // Weighted greedy cover. The local pod is covered by the first pick.
  std::vector<std::uint8_t> covered(remote.size(), 0);
  std::vector<std::uint8_t> used(planes, 0);
  const std::uint64_t local_weight = 1;
  bool local_done = false;
  while (true) {
    std::uint32_t best = planes;
    std::uint64_t best_gain = 0;
    for (std::uint32_t j : live) {
      if (used[j]) continue;
      std::uint64_t gain = local_done ? 0 : local_weight;
      for (std::size_t k = 0; k < remote.size(); ++k) {
        if (!covered[k] && reaches(j, remote[k])) {
          gain += rx_pod_count_[remote[k]];
        }
      }
      if (gain > best_gain) {
        best = j;
        best_gain = gain;
      }
    }
    if (best == planes) break;
    used[best] = 1;
    c.planes.push_back(best);
    local_done = true;
    for (std::size_t k = 0; k < remote.size(); ++k) {
      if (reaches(best, remote[k])) covered[k] = 1;
    }
  }
  std::sort(c.planes.begin(), c.planes.end());
  for (std::size_t k = 0; k < remote.size(); ++k) {
    if (!covered[k]) c.unreachable_pods.push_back(rx_pods_[remote[k]]);
  }
  return c;
}

bool FailoverPlanner::multipath_kept(HostId source) const {
  return choose(source).kept;
}

FailoverResult FailoverPlanner::plan(HostId source) const {
  FailoverResult out;
  out.rules = default_upstream(topo_, tree_, source);
  const Choice c = choose(source);
  if (c.kept) return out;
  out.multipath_kept = false;
  PRule& leaf = out.rules.leaf;
  const std::uint32_t hpl = topo_.spec().hosts_per_leaf;
  for (std::uint32_t j = 0; j < topo_.spec().spines_per_pod; ++j) {
    leaf.bitmap.reset(hpl + j);
  }
  for (std::uint32_t j : c.planes) leaf.bitmap.set(hpl + j);
  leaf.multipath = false;
  const std::uint32_t sl = topo_.leaf_of_host(source);
  for (HostId r : tree_.receivers) {
    if (r == source || topo_.leaf_of_host(r) == sl) continue;
    const std::uint32_t p = topo_.pod_of_host(r);
    const bool lost =
        std::find(c.unreachable_pods.begin(), c.unreachable_pods.end(), p) !=
            c.unreachable_pods.end() ||
        c.planes.empty();
    if (lost) out.unreachable.push_back(r);
  }
  return out;
}

FailoverResult compute_upstream_failover(const Topology& topo,
                                         const MulticastTree& tree,
                                         HostId source,
                                         const FailureSet& failures) {
  return FailoverPlanner(topo, tree, failures).plan(source);
}

}  // namespace srmc
