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

#ifndef SRMC_CONFIG_H_
#define SRMC_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srmc/cluster.h"
#include "srmc/topology.h"
#include "srmc/workload.h"

namespace srmc {

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// Flat "key = value" text with "[section]" headers and '#' comments.
std::vector<ConfigEntry> parse_config_text(std::string_view text);

struct ChurnSchedule {
  std::uint64_t events = 0;
  std::uint32_t placement = 1;
  SizeDistribution distribution = SizeDistribution::kWve;
  std::uint32_t r = 12;
  std::uint64_t seed = 7;
  double events_per_second = 1000.0;
};

struct FailureSchedule {
  bool enabled = false;
  std::uint32_t placement = 12;
  SizeDistribution distribution = SizeDistribution::kWve;
  std::uint32_t r = 12;
  // Empty means the most used spine and the most used core.
  std::vector<SwitchRef> switches;
  // Senders simulated per impacted group.
  std::uint32_t max_senders = 32;
};

struct ScenarioConfig {
  std::string name = "scenario";
  TopologySpec topology = TopologySpec::Fabric();

  std::uint32_t tenants = 3000;
  std::uint64_t groups = 1000000;
  std::vector<std::uint32_t> placements{12};
  std::vector<SizeDistribution> distributions{SizeDistribution::kWve};
  std::uint64_t seed = 1;
  std::uint32_t host_capacity = 20;
  // Tenant sizes: min + exponential(scale), capped at max.
  std::uint32_t tenant_min = 10;
  double tenant_scale = 168.7705;
  std::uint32_t tenant_max = 5000;

  std::vector<std::uint32_t> r_values{0, 6, 12};
  std::uint32_t header_budget = 325;
  std::optional<std::uint32_t> leaf_rules;  // derived from the budget if unset
  std::uint32_t spine_rules = 2;
  std::uint32_t leaf_k_max = 2;
  std::uint32_t spine_k_max = 4;
  std::uint32_t f_max = kUnbounded;

  std::vector<std::uint32_t> payloads{1500, 64};

  ChurnSchedule churn;
  FailureSchedule failure;

  std::string output_dir = "out";

  static ScenarioConfig Parse(std::string_view text);
  static ScenarioConfig Load(const std::string& path);

  // Cross-field checks; throws ConfigError.
  void validate() const;

  std::uint64_t tenant_seed() const;
  std::uint64_t placement_seed(std::uint32_t p) const;
  std::uint64_t group_seed(std::uint32_t p, SizeDistribution d) const;

  EncodingConfig encoding(const Topology& topo, std::uint32_t r) const;

  // Canonical text form; parses back to an equal config.
  std::string to_string() const;
};

SwitchRef parse_switch_name(std::string_view s);

}  // namespace srmc

#endif  // SRMC_CONFIG_H_
