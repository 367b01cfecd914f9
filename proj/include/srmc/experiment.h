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

#ifndef SRMC_EXPERIMENT_H_
#define SRMC_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "srmc/cluster.h"
#include "srmc/config.h"
#include "srmc/controller.h"
#include "srmc/placement.h"
#include "srmc/topology.h"
#include "srmc/workload.h"

namespace srmc {

// Worker count from SRMC_WORKERS, else the OpenMP default.
int worker_count();

enum class ExecMode : std::uint8_t { kSerial, kParallel };

// Tenants, placement and group catalog for one (P, distribution) pair.
struct Workload {
  Topology topo;
  std::uint32_t placement_p = 0;
  SizeDistribution distribution = SizeDistribution::kWve;
  std::uint64_t group_seed = 0;
  Placement placement;
  std::unique_ptr<GroupCatalog> catalog;

  Workload(const ScenarioConfig& cfg, std::uint32_t p, SizeDistribution d);
  Workload(const Workload&) = delete;
  Workload& operator=(const Workload&) = delete;

  std::uint32_t num_groups() const {
    return static_cast<std::uint32_t>(catalog->size());
  }
};

struct OccupancyStats {
  std::uint64_t switches = 0;
  std::uint64_t total = 0;
  double mean = 0;
  std::uint64_t p95 = 0;
  std::uint64_t max = 0;
};

OccupancyStats occupancy_stats(std::vector<std::uint64_t> per_switch);

struct LatencyStats {
  std::uint64_t samples = 0;
  double mean_us = 0;
  double stddev_us = 0;
  double p50_us = 0;
  double p95_us = 0;
  double p99_us = 0;
  double max_us = 0;
};

struct InstallResult {
  std::uint32_t placement_p = 0;
  SizeDistribution distribution = SizeDistribution::kWve;
  std::uint32_t r = 0;
  std::uint64_t seed = 0;

  std::uint64_t groups = 0;
  std::uint64_t covered = 0;
  std::uint64_t leaf_default_groups = 0;
  std::uint64_t spine_default_groups = 0;
  std::uint64_t s_rule_groups = 0;
  OccupancyStats leaf_srules;
  OccupancyStats spine_srules;

  // One packet per group from a seeded sender.
  std::uint64_t groups_simulated = 0;
  std::uint64_t packets = 0;
  std::uint64_t header_bytes = 0;
  std::uint64_t ideal_packets = 0;
  std::uint64_t unicast_packets = 0;
  std::uint64_t overlay_packets = 0;
  std::uint64_t spurious = 0;
  std::uint64_t max_header_bytes = 0;

  std::uint64_t violations = 0;
  std::string first_violation;

  LatencyStats latency;

  double coverage() const {
    return groups ? static_cast<double>(covered) / static_cast<double>(groups)
                  : 1.0;
  }
  // Total bytes over ideal bytes, minus one, for a payload size.
  double overhead(std::uint64_t payload) const;
  double unicast_overhead() const;
  double overlay_overhead() const;
};

struct InstallOptions {
  ExecMode mode = ExecMode::kParallel;
  bool simulate = true;
  // Keep per-group s-rule holdings and the final ledger.
  bool keep_state = false;
  std::uint32_t chunk = 8192;
};

struct InstallState {
  SRuleLedger ledger;
  std::vector<std::vector<SRuleHolding>> holdings;
};

// Installs every group of the workload in id order. Clustering and
// simulation run in parallel; s-rule reservation runs in id order so the
// ledger does not depend on the worker count.
InstallResult run_install(const Workload& w, const EncodingConfig& cfg,
                          const InstallOptions& opt = {},
                          InstallState* state = nullptr);

struct ChurnResult {
  std::uint32_t placement_p = 0;
  SizeDistribution distribution = SizeDistribution::kWve;
  std::uint32_t r = 0;
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  UpdateLog::Normalized join;
  UpdateLog::Normalized leave;
  UpdateLog::Normalized all;
  UpdateRateReport rates;
  std::uint64_t total_hypervisor_updates = 0;
  std::uint64_t total_leaf_updates = 0;
  std::uint64_t total_spine_updates = 0;
  std::uint64_t violations = 0;
  std::string first_violation;
};

ChurnResult run_churn(const ScenarioConfig& cfg, ExecMode mode);

struct FailureResult {
  std::uint32_t placement_p = 0;
  SizeDistribution distribution = SizeDistribution::kWve;
  std::uint32_t r = 0;
  std::uint64_t seed = 0;
  FailureReport report;
};

// Single-switch failures over the full workload. With no switches listed,
// fails the spine and the core that the most groups cross.
std::vector<FailureResult> run_failures(const ScenarioConfig& cfg,
                                        ExecMode mode);

// Per-switch count of groups whose default routes cross it.
struct TraversalCounts {
  std::vector<std::uint64_t> spines;
  std::vector<std::uint64_t> cores;
};
TraversalCounts count_traversals(const Workload& w, ExecMode mode);

struct VerifyResult {
  std::uint64_t cells = 0;
  std::uint64_t groups_checked = 0;
  std::uint64_t packets_checked = 0;
  std::uint64_t headers_round_tripped = 0;
  std::uint64_t failures_checked = 0;
  std::uint64_t partitions = 0;
  bool ok = true;
  std::string message;
};

// Exhaustive invariant sweep for small topologies. `cfg_hook` may modify
// each encoding config before use.
VerifyResult run_verify(const ScenarioConfig& cfg,
                        void (*cfg_hook)(EncodingConfig&) = nullptr);

// CSV writers. Each file starts with a schema comment line.
inline constexpr const char* kCsvSchema = "# srmc-csv v1";

void write_coverage_csv(std::ostream& os,
                        const std::vector<InstallResult>& rows);
void write_srules_csv(std::ostream& os, const std::vector<InstallResult>& rows);
void write_overhead_csv(std::ostream& os,
                        const std::vector<InstallResult>& rows,
                        const std::vector<std::uint32_t>& payloads);
void write_latency_csv(std::ostream& os,
                       const std::vector<InstallResult>& rows);
void write_updates_csv(std::ostream& os, const std::vector<ChurnResult>& rows);
void write_failures_csv(std::ostream& os,
                        const std::vector<FailureResult>& rows);

}  // namespace srmc

#endif  // SRMC_EXPERIMENT_H_
