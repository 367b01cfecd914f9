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

#include "srmc/placement.h"

#include <algorithm>
#include <numeric>

#include "srmc/error.h"
#include "srmc/rng.h"

namespace srmc {

void PlacementConfig::validate(const Topology& topo) const {
  if (max_per_leaf < 1 || max_per_leaf > topo.spec().hosts_per_leaf) {
    throw InvalidArgument("P must be in [1, hosts_per_leaf], got " +
                          std::to_string(max_per_leaf));
  }
  if (host_capacity < 1) throw InvalidArgument("host capacity must be >= 1");
}

Placement::Placement(const Topology& topo,
                     std::vector<std::uint32_t> tenant_sizes,
                     std::vector<HostId> vm_host,
                     std::uint32_t host_capacity)
    : vm_host_(std::move(vm_host)), host_load_(topo.num_hosts(), 0) {
  VmId next = 0;
  for (std::uint32_t t = 0; t < tenant_sizes.size(); ++t) {
    tenants_.push_back({t, next, tenant_sizes[t]});
    next += tenant_sizes[t];
  }
  if (next != vm_host_.size()) {
    throw InvalidArgument("vm count does not match tenant sizes");
  }
  vm_tenant_.resize(vm_host_.size());
  for (const Tenant& t : tenants_) {
    std::vector<HostId> hosts;
    for (VmId v = t.first_vm; v < t.first_vm + t.size; ++v) {
      vm_tenant_[v] = t.id;
      const HostId h = vm_host_[v];
      if (h >= topo.num_hosts()) {
        throw InvalidArgument("vm " + std::to_string(v) + " on unknown host");
      }
      hosts.push_back(h);
      if (++host_load_[h] > host_capacity) {
        throw InvalidArgument("host " + std::to_string(h) +
                              " exceeds capacity");
      }
    }
    std::sort(hosts.begin(), hosts.end());
    if (std::adjacent_find(hosts.begin(), hosts.end()) != hosts.end()) {
      throw InvalidArgument("tenant " + std::to_string(t.id) +
                            " has two VMs on one host");
    }
  }
}

std::uint32_t Placement::max_tenant_vms_per_leaf(const Topology& topo) const {
  std::uint32_t best = 0;
  std::vector<std::uint32_t> per_leaf(topo.num_leaves(), 0);
  for (const Tenant& t : tenants_) {
    for (VmId v = t.first_vm; v < t.first_vm + t.size; ++v) {
      best = std::max(best, ++per_leaf[topo.leaf_of_host(vm_host_[v])]);
    }
    for (VmId v = t.first_vm; v < t.first_vm + t.size; ++v) {
      per_leaf[topo.leaf_of_host(vm_host_[v])] = 0;
    }
  }
  return best;
}

Placement place_tenants(const Topology& topo,
                        std::span<const std::uint32_t> tenant_sizes,
                        const PlacementConfig& cfg) {
  cfg.validate(topo);
  const std::uint64_t demand = std::accumulate(
      tenant_sizes.begin(), tenant_sizes.end(), std::uint64_t{0});
  if (demand > std::uint64_t{topo.num_hosts()} * cfg.host_capacity) {
    throw PlacementInfeasible("demand of " + std::to_string(demand) +
                              " VMs exceeds host capacity");
  }
  const auto& spec = topo.spec();
  Rng rng(cfg.seed);
  std::vector<std::uint32_t> load(topo.num_hosts(), 0);
  std::vector<std::uint8_t> used_by_tenant(topo.num_hosts(), 0);
  std::vector<std::uint32_t> tenant_on_leaf(topo.num_leaves(), 0);
  std::vector<HostId> vm_host;
  vm_host.reserve(demand);
  std::uint32_t relaxed = 0;

  // A tenant stays in the drawn pod until the pod has no leaf left below the
  // per-leaf cap, then moves to the next drawn pod.
  std::vector<std::uint32_t> pods(spec.num_pods);
  std::vector<std::uint32_t> leaves(spec.leaves_per_pod);
  std::vector<HostId> free_hosts;

  for (std::uint32_t t = 0; t < tenant_sizes.size(); ++t) {
    const std::size_t start = vm_host.size();
    std::uint32_t remaining = tenant_sizes[t];
    std::uint32_t cap = cfg.max_per_leaf;
    while (remaining > 0) {
      bool progress = false;
      std::iota(pods.begin(), pods.end(), 0);
      rng.shuffle(pods);
      for (std::uint32_t pod : pods) {
        std::iota(leaves.begin(), leaves.end(), 0);
        rng.shuffle(leaves);
        for (std::uint32_t li : leaves) {
          const std::uint32_t leaf = topo.leaf(pod, li);
          if (tenant_on_leaf[leaf] >= cap) continue;
          free_hosts.clear();
          for (std::uint32_t p = 0; p < spec.hosts_per_leaf; ++p) {
            const HostId h = topo.host(leaf, p);
            if (load[h] < cfg.host_capacity && !used_by_tenant[h]) {
              free_hosts.push_back(h);
            }
          }
          if (free_hosts.empty()) continue;
          rng.shuffle(free_hosts);
          const std::uint32_t take = std::min<std::uint32_t>(
              {cap - tenant_on_leaf[leaf], remaining,
               static_cast<std::uint32_t>(free_hosts.size())});
          for (std::uint32_t i = 0; i < take; ++i) {
            const HostId h = free_hosts[i];
            ++load[h];
            used_by_tenant[h] = 1;
            vm_host.push_back(h);
          }
          tenant_on_leaf[leaf] += take;
          remaining -= take;
          progress = true;
          if (remaining == 0) break;
        }
        if (remaining == 0) break;
      }
      if (remaining == 0) break;
      if (!progress) {
        throw PlacementInfeasible("cannot place tenant " + std::to_string(t) +
                                  " (" + std::to_string(remaining) +
                                  " VMs left)");
      }
      if (cap >= spec.hosts_per_leaf) {
        throw PlacementInfeasible("cannot place tenant " + std::to_string(t));
      }
      if (cap == cfg.max_per_leaf) ++relaxed;
      cap = std::min(cap + cfg.max_per_leaf, spec.hosts_per_leaf);
    }
    for (std::size_t i = start; i < vm_host.size(); ++i) {
      used_by_tenant[vm_host[i]] = 0;
      tenant_on_leaf[topo.leaf_of_host(vm_host[i])] = 0;
    }
  }
  std::vector<std::uint32_t> sizes(tenant_sizes.begin(), tenant_sizes.end());
  Placement p(topo, std::move(sizes), std::move(vm_host), cfg.host_capacity);
  p.set_relaxed_tenants(relaxed);
  return p;
}

}  // namespace srmc
