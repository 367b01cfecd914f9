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

#ifndef SRMC_PLACEMENT_H_
#define SRMC_PLACEMENT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "srmc/topology.h"

namespace srmc {

using VmId = std::uint32_t;
using TenantId = std::uint32_t;

inline constexpr std::uint32_t kHostCapacity = 20;

struct PlacementConfig {
  // Max VMs of one tenant under one leaf.
  std::uint32_t max_per_leaf = 12;
  std::uint64_t seed = 1;
  std::uint32_t host_capacity = kHostCapacity;

  void validate(const Topology& topo) const;
};

struct Tenant {
  TenantId id = 0;
  VmId first_vm = 0;
  std::uint32_t size = 0;
};

// VM -> host assignment. VMs of tenant t are first_vm .. first_vm+size-1.
class Placement {
 public:
  Placement() = default;
  // Checks host capacity and tenant/host exclusivity.
  Placement(const Topology& topo, std::vector<std::uint32_t> tenant_sizes,
            std::vector<HostId> vm_host, std::uint32_t host_capacity);

  std::span<const Tenant> tenants() const { return tenants_; }
  const Tenant& tenant(TenantId t) const { return tenants_.at(t); }
  std::uint32_t num_vms() const {
    return static_cast<std::uint32_t>(vm_host_.size());
  }
  HostId host_of(VmId vm) const { return vm_host_[vm]; }
  TenantId tenant_of(VmId vm) const { return vm_tenant_[vm]; }
  std::uint32_t host_load(HostId h) const { return host_load_[h]; }
  // Tenants whose per-leaf cap had to be raised to place them.
  std::uint32_t relaxed_tenants() const { return relaxed_tenants_; }
  void set_relaxed_tenants(std::uint32_t n) { relaxed_tenants_ = n; }

  // Largest number of VMs of one tenant under one leaf.
  std::uint32_t max_tenant_vms_per_leaf(const Topology& topo) const;

 private:
  std::vector<Tenant> tenants_;
  std::vector<HostId> vm_host_;
  std::vector<TenantId> vm_tenant_;
  std::vector<std::uint32_t> host_load_;
  std::uint32_t relaxed_tenants_ = 0;
};

// Picks a random untried pod, visits its leaves in random order and packs up
// to P VMs of the tenant per leaf on random hosts with spare capacity. Moves
// to another pod when the current one is exhausted. Throws
// PlacementInfeasible when the VMs do not fit.
Placement place_tenants(const Topology& topo,
                        std::span<const std::uint32_t> tenant_sizes,
                        const PlacementConfig& cfg);

}  // namespace srmc

#endif  // SRMC_PLACEMENT_H_
