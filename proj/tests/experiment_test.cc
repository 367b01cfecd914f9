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

#include "srmc/experiment.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <sstream>

namespace srmc {
namespace {

ScenarioConfig small_config() {
  ScenarioConfig c = ScenarioConfig::Parse(R"(
name = unit
[topology]
pods = 2
spines_per_pod = 2
leaves_per_pod = 8
hosts_per_leaf = 16
cores = 4
[workload]
tenants = 40
groups = 600
placement = 4, 1
distribution = wve, uniform
seed = 5
tenant_scale = 40
tenant_max = 200
[encoding]
r = 0, 4
leaf_rules = 4
spine_rules = 1
f_max = 20
[churn]
events = 400
placement = 1
r = 4
[failure]
enabled = true
placement = 4
r = 4
)");
  return c;
}

std::string csv_of(const std::vector<InstallResult>& rows,
                   const std::vector<std::uint32_t>& payloads) {
  std::ostringstream os;
  write_coverage_csv(os, rows);
  write_srules_csv(os, rows);
  write_overhead_csv(os, rows, payloads);
  return os.str();
}

std::vector<InstallResult> sweep(const ScenarioConfig& cfg, ExecMode mode) {
  std::vector<InstallResult> rows;
  for (auto p : cfg.placements) {
    for (auto d : cfg.distributions) {
      const Workload w(cfg, p, d);
      for (auto r : cfg.r_values) {
        InstallOptions o;
        o.mode = mode;
        o.chunk = 97;
        rows.push_back(run_install(w, cfg.encoding(w.topo, r), o));
      }
    }
  }
  return rows;
}

TEST(Experiment, SerialAndParallelAgree) {
  const ScenarioConfig cfg = small_config();
  const auto serial = sweep(cfg, ExecMode::kSerial);
  setenv("SRMC_WORKERS", "3", 1);
  const auto par3 = sweep(cfg, ExecMode::kParallel);
  setenv("SRMC_WORKERS", "1", 1);
  const auto par1 = sweep(cfg, ExecMode::kParallel);
  unsetenv("SRMC_WORKERS");
  EXPECT_EQ(csv_of(serial, cfg.payloads), csv_of(par3, cfg.payloads));
  EXPECT_EQ(csv_of(serial, cfg.payloads), csv_of(par1, cfg.payloads));
  for (const auto& r : serial) {
    EXPECT_EQ(r.violations, 0u) << r.first_violation;
    EXPECT_EQ(r.groups, 600u);
    EXPECT_EQ(r.groups_simulated, r.groups);
    EXPECT_GE(r.packets, r.ideal_packets);
    EXPECT_GE(r.unicast_packets, r.ideal_packets);
    EXPECT_LE(r.max_header_bytes, 325u);
    EXPECT_EQ(r.latency.samples, r.groups);
  }
}

TEST(Experiment, CsvSchemaAndProvenance) {
  const ScenarioConfig cfg = small_config();
  const Workload w(cfg, 4, SizeDistribution::kWve);
  const auto res = run_install(w, cfg.encoding(w.topo, 4));
  std::ostringstream os;
  write_coverage_csv(os, {res});
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# srmc-csv v1 coverage", 0), 0u);
  EXPECT_NE(s.find("placement,distribution,r,seed"), std::string::npos);
  EXPECT_NE(s.find("\n4,wve,4,"), std::string::npos);
}

TEST(Experiment, ChurnHasNoViolations) {
  const ScenarioConfig cfg = small_config();
  const ChurnResult c = run_churn(cfg, ExecMode::kParallel);
  EXPECT_EQ(c.events, 400u);
  EXPECT_EQ(c.violations, 0u) << c.first_violation;
  EXPECT_EQ(c.join.events + c.leave.events, 400u);
  EXPECT_GT(c.all.hypervisor, 0.0);
  const ChurnResult again = run_churn(cfg, ExecMode::kSerial);
  EXPECT_EQ(again.total_hypervisor_updates, c.total_hypervisor_updates);
  EXPECT_EQ(again.total_leaf_updates, c.total_leaf_updates);
}

TEST(Experiment, FailuresDeliverToReachableReceivers) {
  const ScenarioConfig cfg = small_config();
  const auto res = run_failures(cfg, ExecMode::kParallel);
  ASSERT_EQ(res.size(), 2u);
  for (const auto& f : res) {
    EXPECT_EQ(f.report.delivery_failures, 0u) << switch_name(f.report.failed);
    EXPECT_GT(f.report.impacted_groups, 0u);
    EXPECT_LE(f.report.impacted_groups, f.report.groups_total);
  }
  const auto serial = run_failures(cfg, ExecMode::kSerial);
  for (std::size_t i = 0; i < res.size(); ++i) {
    EXPECT_EQ(serial[i].report.impacted_groups, res[i].report.impacted_groups);
    EXPECT_EQ(serial[i].report.diff.hypervisors, res[i].report.diff.hypervisors);
  }
}

TEST(Experiment, VerifyPassesAndCatchesMutation) {
  const ScenarioConfig cfg =
      ScenarioConfig::Load(std::string(SRMC_CONFIG_DIR) + "/verify.cfg");
  const VerifyResult ok = run_verify(cfg);
  EXPECT_TRUE(ok.ok) << ok.message;
  EXPECT_GT(ok.packets_checked, 1000u);
  const VerifyResult bad =
      run_verify(cfg, [](EncodingConfig& c) { c.inject_union_off_by_one = true; });
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.message.find("seed"), std::string::npos) << bad.message;
}

TEST(Experiment, SmokeScaleIsFast) {
  const ScenarioConfig cfg =
      ScenarioConfig::Load(std::string(SRMC_CONFIG_DIR) + "/smoke.cfg");
  const auto t0 = std::chrono::steady_clock::now();
  const Workload w(cfg, 12, SizeDistribution::kWve);
  const auto res = run_install(w, cfg.encoding(w.topo, 12));
  const double s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  EXPECT_EQ(res.violations, 0u);
  EXPECT_LT(s, 10.0);
}

TEST(Experiment, OccupancyPercentile) {
  const auto s = occupancy_stats({0, 1, 2, 3, 4, 5, 6, 7, 8, 9,
                                  10, 11, 12, 13, 14, 15, 16, 17, 18, 100});
  EXPECT_EQ(s.switches, 20u);
  EXPECT_EQ(s.total, 271u);
  EXPECT_EQ(s.p95, 18u);
  EXPECT_EQ(s.max, 100u);
  EXPECT_DOUBLE_EQ(s.mean, 271.0 / 20);
}

}  // namespace
}  // namespace srmc
