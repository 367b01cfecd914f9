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

#ifndef SRMC_CONTROLLER_H_
#define SRMC_CONTROLLER_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "srmc/cluster.h"
#include "srmc/dataplane.h"
#include "srmc/encode.h"
#include "srmc/failover.h"
#include "srmc/multicast_tree.h"
#include "srmc/placement.h"
#include "srmc/topology.h"
#include "srmc/wire.h"
#include "srmc/workload.h"

namespace srmc {

// Switches whose stored state changed. Sorted, no duplicates.
struct UpdateDiff {
  std::vector<HostId> hypervisors;
  std::vector<std::uint32_t> leaves;
  std::vector<std::uint32_t> spines;

  bool empty() const {
    return hypervisors.empty() && leaves.empty() && spines.empty();
  }
  void merge(const UpdateDiff& o);
};

// Hypervisor state of one group on one host: a digest of the header pushed
// for local senders, and whether the local VM receives.
struct HypervisorEntry {
  std::uint64_t header_digest = 0;
  bool sends = false;
  bool receives = false;

  friend bool operator==(const HypervisorEntry&,
                         const HypervisorEntry&) = default;
};

// A logical switch holding an s-rule for a group.
struct SRuleHolding {
  Layer layer = Layer::kLeaf;
  std::uint32_t id = 0;

  friend bool operator==(const SRuleHolding&, const SRuleHolding&) = default;
};

std::vector<SRuleHolding> holdings_of(const GroupEncoding& enc);

// Rebuilds a layer encoding from its clusters and the switches known to hold
// s-rules, without touching any ledger.
GroupEncoding rebuild_encoding(GroupClusters&& clusters,
                               const std::vector<SRuleHolding>& holdings);

struct GroupState {
  GroupSpec spec;
  MulticastTree tree;
  GroupEncoding enc;
  std::vector<std::pair<HostId, HypervisorEntry>> hypervisors;  // by host
};

// Digest of the header `source` pushes, computed section by section.
std::uint64_t header_digest(const Topology& topo, const WireLayout& layout,
                            const MulticastTree& tree, const GroupEncoding& enc,
                            HostId source,
                            const UpstreamRules* upstream = nullptr);

struct FailureReport {
  SwitchRef failed;
  std::uint64_t groups_total = 0;
  std::uint64_t impacted_groups = 0;
  std::uint64_t partitioned_groups = 0;
  std::uint64_t unreachable_receivers = 0;
  // Groups whose post-failure simulation missed a reachable receiver.
  std::uint64_t delivery_failures = 0;
  std::uint64_t duplicate_deliveries = 0;
  std::uint64_t senders_simulated = 0;
  std::uint64_t senders_rerouted = 0;
  UpdateDiff diff;
  // Updates per hypervisor that changed.
  double mean_hypervisor_updates = 0;
  std::uint64_t max_hypervisor_updates = 0;
};

// True when some sender's multipath route with every switch alive
// crosses `sw`.
bool tree_traverses(const Topology& topo, const MulticastTree& tree,
                    SwitchRef sw);

struct GroupFailureOutcome {
  bool impacted = false;
  bool partitioned = false;
  std::uint64_t unreachable_receivers = 0;
  // Senders whose hypervisor header must change.
  std::vector<HostId> rerouted;
  std::uint64_t senders_simulated = 0;
  bool delivery_failure = false;
  std::uint64_t duplicates = 0;
};

// Plans failover for every sender of an impacted group and simulates up to
// `max_senders` of them, evenly spaced over the sender list.
GroupFailureOutcome analyze_group_failure(const Topology& topo,
                                          const WireLayout& layout,
                                          const MulticastTree& tree,
                                          const GroupEncoding& enc,
                                          const FailureSet& failures,
                                          SwitchRef failed,
                                          std::uint32_t max_senders);

class Controller {
 public:
  Controller(const Topology& topo, const Placement& placement,
             const EncodingConfig& cfg);

  const Topology& topology() const { return *topo_; }
  const EncodingConfig& config() const { return cfg_; }
  const WireLayout& layout() const { return layout_; }
  const SRuleLedger& ledger() const { return ledger_; }

  // Encodes and installs a group. Returns every switch that gained state.
  UpdateDiff install_group(const GroupSpec& group);

  // Takes over groups installed in bulk: `source` yields each group's
  // initial membership, `holdings[g]` its s-rule switches, and `ledger` the
  // occupancy after the bulk pass. Groups are rebuilt on first use.
  void adopt(std::function<GroupSpec(std::uint32_t)> source,
             std::vector<std::vector<SRuleHolding>> holdings,
             SRuleLedger ledger);

  // Applies a join or leave and re-encodes only the layers whose inputs
  // changed. Throws InvalidArgument for events that do not fit the current
  // membership.
  UpdateDiff apply_event(const ChurnEvent& ev);

  // Keeps at most n groups expanded. The rest are stored as membership and
  // s-rule holdings and rebuilt on use.
  void set_cache_limit(std::size_t n);

  const GroupState& group(std::uint32_t g);
  bool has_group(std::uint32_t g) const;

  // Simulates one packet of group g from `source` against the installed
  // state.
  DeliveryReport simulate(std::uint32_t g, HostId source,
                          const FailureSet* failures = nullptr,
                          const UpstreamRules* upstream = nullptr);

  // Fails a spine or core, reroutes the senders of every installed group
  // that crossed it and re-simulates them.
  FailureReport apply_failure(SwitchRef failed,
                              std::uint32_t max_senders = kUnbounded);
  const FailureSet& failures() const { return failures_; }

  // Line-oriented dump of the state of group g.
  std::string dump(std::uint32_t g);

 private:
  struct Compact {
    GroupSpec spec;
    std::vector<SRuleHolding> holdings;
  };

  GroupState& state(std::uint32_t g);
  GroupState& expand(std::uint32_t g, GroupState&& st);
  void evict(std::uint32_t keep);
  void refresh_hypervisors(GroupState& st);

  const Topology* topo_;
  const Placement* placement_;
  EncodingConfig cfg_;
  WireLayout layout_;
  SRuleLedger ledger_;
  std::function<GroupSpec(std::uint32_t)> source_;
  std::vector<std::vector<SRuleHolding>> holdings_;
  std::unordered_map<std::uint32_t, GroupState> live_;
  std::unordered_map<std::uint32_t, Compact> compact_;
  std::deque<std::uint32_t> order_;
  std::size_t cache_limit_ = static_cast<std::size_t>(-1);
  FailureSet failures_;
};

// Physical switches on the pre-failure paths of a group's packets:
// marks spine and core indices in the given flags (one per switch).
void mark_traversed(const Topology& topo, const MulticastTree& tree,
                    std::vector<std::uint8_t>& spines,
                    std::vector<std::uint8_t>& cores);

// Per-switch update totals of a churn replay.
class UpdateLog {
 public:
  explicit UpdateLog(const Topology& topo);

  void record(const UpdateDiff& d, ChurnKind kind, std::size_t group_size);

  std::uint64_t events() const { return events_; }
  // Mean per-event updates divided by the group size before the event.
  struct Normalized {
    double hypervisor = 0;
    double leaf = 0;
    double spine = 0;
    std::uint64_t events = 0;
  };
  Normalized normalized(ChurnKind kind) const;
  Normalized normalized_all() const;

  std::span<const std::uint64_t> hypervisor_counts() const { return hv_; }
  std::span<const std::uint64_t> leaf_counts() const { return leaf_; }
  std::span<const std::uint64_t> spine_counts() const { return spine_; }

 private:
  std::vector<std::uint64_t> hv_, leaf_, spine_;
  std::uint64_t events_ = 0;
  struct Sums {
    double hv = 0, leaf = 0, spine = 0;
    std::uint64_t n = 0;
  };
  Sums sums_[2];
};

struct RateStats {
  double mean = 0;  // over switches with at least one update
  double max = 0;
  double threshold = 0;
  double headroom = 0;  // threshold / max
};

struct UpdateRateReport {
  double events_per_second = 0;
  RateStats hypervisor;
  RateStats leaf;
  RateStats spine;
};

inline constexpr double kHypervisorUpdateLimit = 2000.0;
inline constexpr double kSwitchUpdateLimit = 100.0;

UpdateRateReport update_rate_report(const UpdateLog& log,
                                    double events_per_second);

}  // namespace srmc

#endif  // SRMC_CONTROLLER_H_
