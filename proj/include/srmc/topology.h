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

#ifndef SRMC_TOPOLOGY_H_
#define SRMC_TOPOLOGY_H_

#include <cstdint>
#include <span>
#include <string>

#include "srmc/port_bitmap.h"

namespace srmc {

using HostId = std::uint32_t;

enum class Layer : std::uint8_t { kHost, kLeaf, kSpine, kCore };

const char* layer_name(Layer layer);

// Three-tier Clos. Cores are split into `spines_per_pod` planes of
// cores / spines_per_pod switches each; spine j of every pod connects to
// every core of plane j.
struct TopologySpec {
  std::uint32_t num_pods = 0;
  std::uint32_t spines_per_pod = 0;
  std::uint32_t leaves_per_pod = 0;
  std::uint32_t hosts_per_leaf = 0;
  std::uint32_t cores = 0;

  // Four pods of two spines and two leaves, eight hosts per leaf, four cores.
  static TopologySpec Fig3();
  // 12 pods x 48 leaves x 48 hosts = 27,648 hosts; 4 spines per pod, 16 cores.
  static TopologySpec Fabric();

  void validate() const;
  std::string to_string() const;
};

struct SwitchRef {
  Layer layer = Layer::kLeaf;
  std::uint32_t index = 0;

  friend bool operator==(const SwitchRef&, const SwitchRef&) = default;
  friend auto operator<=>(const SwitchRef&, const SwitchRef&) = default;
};

std::string switch_name(SwitchRef s);

// Collapsed view: one logical spine per pod and one logical core. Leaves are
// their own logical switches.
struct LogicalTopology {
  std::uint32_t num_pods = 0;
  std::uint32_t num_leaves = 0;
  std::uint32_t leaf_id_bits = 0;
  std::uint32_t spine_id_bits = 0;
  std::uint32_t core_id_bits = 0;
  std::uint32_t leaf_down = 0;
  std::uint32_t leaf_up = 0;
  std::uint32_t spine_down = 0;
  std::uint32_t spine_up = 0;
  std::uint32_t core_down = 0;
};

// ceil(log2(n)), at least 1.
std::uint32_t id_bits_for(std::uint64_t n);

class Topology {
 public:
  explicit Topology(const TopologySpec& spec);

  const TopologySpec& spec() const { return spec_; }
  const LogicalTopology& logical() const { return logical_; }

  std::uint32_t num_hosts() const { return num_leaves() * spec_.hosts_per_leaf; }
  std::uint32_t num_leaves() const {
    return spec_.num_pods * spec_.leaves_per_pod;
  }
  std::uint32_t num_spines() const {
    return spec_.num_pods * spec_.spines_per_pod;
  }
  std::uint32_t num_cores() const { return spec_.cores; }
  std::uint32_t num_pods() const { return spec_.num_pods; }
  std::uint32_t cores_per_plane() const {
    return spec_.cores / spec_.spines_per_pod;
  }

  std::uint32_t leaf_of_host(HostId h) const {
    return h / spec_.hosts_per_leaf;
  }
  std::uint32_t host_port(HostId h) const { return h % spec_.hosts_per_leaf; }
  HostId host(std::uint32_t leaf, std::uint32_t port) const {
    return leaf * spec_.hosts_per_leaf + port;
  }
  std::uint32_t pod_of_leaf(std::uint32_t leaf) const {
    return leaf / spec_.leaves_per_pod;
  }
  std::uint32_t pod_of_host(HostId h) const {
    return pod_of_leaf(leaf_of_host(h));
  }
  std::uint32_t leaf_index_in_pod(std::uint32_t leaf) const {
    return leaf % spec_.leaves_per_pod;
  }
  std::uint32_t leaf(std::uint32_t pod, std::uint32_t i) const {
    return pod * spec_.leaves_per_pod + i;
  }
  std::uint32_t spine(std::uint32_t pod, std::uint32_t plane) const {
    return pod * spec_.spines_per_pod + plane;
  }
  std::uint32_t spine_pod(std::uint32_t s) const {
    return s / spec_.spines_per_pod;
  }
  std::uint32_t spine_plane(std::uint32_t s) const {
    return s % spec_.spines_per_pod;
  }
  std::uint32_t core(std::uint32_t plane, std::uint32_t i) const {
    return plane * cores_per_plane() + i;
  }
  std::uint32_t core_plane(std::uint32_t c) const {
    return c / cores_per_plane();
  }
  std::uint32_t core_index_in_plane(std::uint32_t c) const {
    return c % cores_per_plane();
  }

  // Physical port counts split into downstream [0, D) and upstream [D, D+U).
  std::uint32_t downstream_width(Layer layer) const;
  std::uint32_t upstream_width(Layer layer) const;
  std::uint32_t port_count(Layer layer) const {
    return downstream_width(layer) + upstream_width(layer);
  }

  // Throws InvalidArgument for switches that do not exist.
  void check(SwitchRef s) const;

  // Full-width bitmap of s with the downstream ports leading to any of
  // `members` set. Hosts not below s are ignored.
  PortBitmap downstream_ports(SwitchRef s, std::span<const HostId> members) const;
  // Full-width bitmap of s with every upstream port set.
  PortBitmap upstream_ports(SwitchRef s) const;

  // Links on the shortest path between two hosts.
  std::uint32_t hops(HostId a, HostId b) const;

 private:
  TopologySpec spec_;
  LogicalTopology logical_;
};

}  // namespace srmc

#endif  // SRMC_TOPOLOGY_H_
