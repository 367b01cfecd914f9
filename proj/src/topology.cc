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

#include "srmc/topology.h"

#include <sstream>

#include "srmc/error.h"

namespace srmc {

const char* layer_name(Layer layer) {
  switch (layer) {
    case Layer::kHost:
      return "host";
    case Layer::kLeaf:
      return "leaf";
    case Layer::kSpine:
      return "spine";
    case Layer::kCore:
      return "core";
  }
  return "?";
}

TopologySpec TopologySpec::Fig3() { return {4, 2, 2, 8, 4}; }

TopologySpec TopologySpec::Fabric() { return {12, 4, 48, 48, 16}; }

void TopologySpec::validate() const {
  if (num_pods == 0 || spines_per_pod == 0 || leaves_per_pod == 0 ||
      hosts_per_leaf == 0 || cores == 0) {
    throw InvalidArgument("topology counts must be >= 1: " + to_string());
  }
  if (cores % spines_per_pod != 0) {
    throw InvalidArgument("cores must be a multiple of spines_per_pod: " +
                          to_string());
  }
  const std::size_t max = PortBitmap::kMaxWidth;
  if (hosts_per_leaf + spines_per_pod > max ||
      leaves_per_pod + cores / spines_per_pod > max || num_pods > max) {
    throw InvalidArgument("switch port count exceeds " + std::to_string(max));
  }
}

std::string TopologySpec::to_string() const {
  std::ostringstream os;
  os << "pods=" << num_pods << " spines_per_pod=" << spines_per_pod
     << " leaves_per_pod=" << leaves_per_pod
     << " hosts_per_leaf=" << hosts_per_leaf << " cores=" << cores;
  return os.str();
}

std::string switch_name(SwitchRef s) {
  const char* prefix = "?";
  switch (s.layer) {
    case Layer::kHost:
      prefix = "H";
      break;
    case Layer::kLeaf:
      prefix = "L";
      break;
    case Layer::kSpine:
      prefix = "S";
      break;
    case Layer::kCore:
      prefix = "C";
      break;
  }
  return prefix + std::to_string(s.index);
}

std::uint32_t id_bits_for(std::uint64_t n) {
  std::uint32_t bits = 0;
  while ((std::uint64_t{1} << bits) < n) ++bits;
  return bits == 0 ? 1 : bits;
}

Topology::Topology(const TopologySpec& spec) : spec_(spec) {
  spec_.validate();
  logical_.num_pods = spec_.num_pods;
  logical_.num_leaves = num_leaves();
  logical_.leaf_id_bits = id_bits_for(num_leaves());
  logical_.spine_id_bits = id_bits_for(num_spines());
  logical_.core_id_bits = id_bits_for(num_cores());
  logical_.leaf_down = spec_.hosts_per_leaf;
  logical_.leaf_up = spec_.spines_per_pod;
  logical_.spine_down = spec_.leaves_per_pod;
  logical_.spine_up = cores_per_plane();
  logical_.core_down = spec_.num_pods;
}

std::uint32_t Topology::downstream_width(Layer layer) const {
  switch (layer) {
    case Layer::kLeaf:
      return spec_.hosts_per_leaf;
    case Layer::kSpine:
      return spec_.leaves_per_pod;
    case Layer::kCore:
      return spec_.num_pods;
    case Layer::kHost:
      return 0;
  }
  return 0;
}

std::uint32_t Topology::upstream_width(Layer layer) const {
  switch (layer) {
    case Layer::kLeaf:
      return spec_.spines_per_pod;
    case Layer::kSpine:
      return cores_per_plane();
    case Layer::kCore:
      return 0;
    case Layer::kHost:
      return 1;
  }
  return 0;
}

void Topology::check(SwitchRef s) const {
  std::uint32_t n = 0;
  switch (s.layer) {
    case Layer::kHost:
      n = num_hosts();
      break;
    case Layer::kLeaf:
      n = num_leaves();
      break;
    case Layer::kSpine:
      n = num_spines();
      break;
    case Layer::kCore:
      n = num_cores();
      break;
  }
  if (s.index >= n) {
    throw InvalidArgument("unknown switch " + switch_name(s));
  }
}

PortBitmap Topology::downstream_ports(SwitchRef s,
                                      std::span<const HostId> members) const {
  check(s);
  if (s.layer == Layer::kHost) throw InvalidArgument("hosts have no ports");
  PortBitmap b(port_count(s.layer));
  for (HostId h : members) {
    if (h >= num_hosts()) {
      throw InvalidArgument("unknown host " + std::to_string(h));
    }
    const std::uint32_t l = leaf_of_host(h);
    switch (s.layer) {
      case Layer::kLeaf:
        if (l == s.index) b.set(host_port(h));
        break;
      case Layer::kSpine:
        if (pod_of_leaf(l) == spine_pod(s.index)) b.set(leaf_index_in_pod(l));
        break;
      case Layer::kCore:
        b.set(pod_of_leaf(l));
        break;
      case Layer::kHost:
        break;
    }
  }
  return b;
}

PortBitmap Topology::upstream_ports(SwitchRef s) const {
  check(s);
  if (s.layer == Layer::kHost) throw InvalidArgument("hosts have no ports");
  PortBitmap b(port_count(s.layer));
  const std::uint32_t d = downstream_width(s.layer);
  for (std::uint32_t i = 0; i < upstream_width(s.layer); ++i) b.set(d + i);
  return b;
}

std::uint32_t Topology::hops(HostId a, HostId b) const {
  if (a == b) return 0;
  const std::uint32_t la = leaf_of_host(a), lb = leaf_of_host(b);
  if (la == lb) return 2;
  if (pod_of_leaf(la) == pod_of_leaf(lb)) return 4;
  return 6;
}

}  // namespace srmc
