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

#ifndef SRMC_DATAPLANE_H_
#define SRMC_DATAPLANE_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "srmc/cluster.h"
#include "srmc/encode.h"
#include "srmc/failover.h"
#include "srmc/multicast_tree.h"
#include "srmc/topology.h"
#include "srmc/wire.h"

namespace srmc {

// Read-only s-rule lookup keyed by (physical switch, group).
class SRuleSource {
 public:
  virtual ~SRuleSource() = default;
  virtual const PortBitmap* lookup(SwitchRef sw, std::uint32_t group) const = 0;
};

// Group tables of every leaf and spine switch.
class SRuleTables : public SRuleSource {
 public:
  SRuleTables() = default;
  SRuleTables(const Topology& topo, std::uint32_t f_max = kUnbounded);

  // Throws InvariantViolation when the table is full.
  void install(SwitchRef sw, std::uint32_t group, const PortBitmap& bitmap);
  // Returns false when there was no entry.
  bool remove(SwitchRef sw, std::uint32_t group);
  const PortBitmap* lookup(SwitchRef sw, std::uint32_t group) const override;
  std::size_t size(SwitchRef sw) const;
  std::uint32_t f_max() const { return f_max_; }

 private:
  using Table = std::unordered_map<std::uint32_t, PortBitmap>;
  Table& table(SwitchRef sw);
  const Table* find_table(SwitchRef sw) const;

  std::uint32_t f_max_ = kUnbounded;
  std::vector<Table> leaf_;
  std::vector<Table> spine_;
};

// s-rules of a single group, for simulating it in isolation.
class GroupSRules : public SRuleSource {
 public:
  GroupSRules(const Topology& topo, const GroupEncoding& enc,
              std::uint32_t group);
  const PortBitmap* lookup(SwitchRef sw, std::uint32_t group) const override;

 private:
  std::uint32_t group_;
  std::vector<SRuleInstall> installs_;
};

enum class Arrival : std::uint8_t { kFromBelow, kFromAbove };

struct ForwardContext {
  const Topology* topo = nullptr;
  const WireLayout* layout = nullptr;
  const SRuleSource* s_rules = nullptr;
  const FailureSet* failures = nullptr;
  std::uint32_t group = 0;
  HostId source = 0;
};

struct ForwardResult {
  enum class Source : std::uint8_t { kPRule, kSRule, kDefault, kDrop };
  Source source = Source::kDrop;
  // Downstream port indices and upstream port indices (0-based within the
  // upstream block).
  std::vector<std::uint32_t> down_ports;
  std::vector<std::uint32_t> up_ports;
  // Header carried on each port class; empty means no p-rule header.
  std::vector<std::uint8_t> down_header;
  std::vector<std::uint8_t> up_header;
  std::size_t bits_scanned = 0;
};

// One forwarding step: p-rule match, else s-rule, else default p-rule,
// else drop. Upstream rules with the multipath flag pick one live uplink by
// a hash of (group, source, switch); without the flag every set live uplink
// is used.
ForwardResult forward_at_switch(const ForwardContext& ctx, SwitchRef sw,
                                Arrival arrival,
                                std::span<const std::uint8_t> header);

struct DeliveryReport {
  // Hosts that received at least one copy, ascending.
  std::vector<HostId> delivered;
  // Hosts that received more than one copy.
  std::vector<HostId> duplicates;
  std::vector<HostId> spurious;  // delivered but not receivers
  std::vector<HostId> missing;   // receivers not delivered
  std::uint64_t link_packets = 0;
  // Sum over links of the p-rule header bytes carried.
  std::uint64_t header_bytes = 0;
  std::uint64_t drops = 0;
  // Same (switch, arrival) seen twice for one packet.
  std::uint64_t revisits = 0;
  std::size_t max_bits_scanned = 0;

  std::uint64_t bytes(std::uint64_t payload) const {
    return link_packets * payload + header_bytes;
  }
};

// Sends one packet from `source` with the hypervisor header `header` and
// follows it to every host. `receivers` (sorted) classify the deliveries;
// the source itself is never an expected receiver. With no other receiver
// nothing is sent.
DeliveryReport simulate_packet(const ForwardContext& ctx,
                               std::span<const std::uint8_t> header,
                               std::span<const HostId> receivers);

// Encodes the header for `source` and simulates it.
DeliveryReport simulate_group(const Topology& topo, const MulticastTree& tree,
                              const GroupEncoding& enc,
                              const SRuleSource& s_rules,
                              const WireLayout& layout, HostId source,
                              const FailureSet* failures = nullptr,
                              const UpstreamRules* upstream = nullptr);

enum class Baseline : std::uint8_t { kIdeal, kUnicast, kOverlay };

// Link transmissions of one packet from `source` under a baseline scheme.
// Baselines carry no p-rule header; multiply by the payload size for bytes.
std::uint64_t baseline_packets(const Topology& topo, const MulticastTree& tree,
                               HostId source, Baseline mode);

}  // namespace srmc

#endif  // SRMC_DATAPLANE_H_
