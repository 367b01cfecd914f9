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

#include "srmc/controller.h"

#include <gtest/gtest.h>

#include "srmc/error.h"
#include "srmc/fig3.h"
#include "srmc/oracle.h"
#include "srmc/placement.h"
#include "srmc/workload.h"

namespace srmc {
namespace {

// One tenant holding every host of the example topology, VM i on host i.
struct Fig3World {
  Topology topo{TopologySpec::Fig3()};
  Placement placement;
  Fig3World() {
    std::vector<HostId> hosts(topo.num_hosts());
    for (HostId h = 0; h < hosts.size(); ++h) hosts[h] = h;
    placement = Placement(topo, {topo.num_hosts()}, hosts, kHostCapacity);
  }
  GroupSpec fig3_group(std::uint32_t id) const {
    const Fig3Example ex;
    GroupSpec g{id, 0, {}};
    for (const auto& m : ex.members) g.members.push_back({m.host, m.role});
    std::sort(g.members.begin(), g.members.end(),
              [](const Member& a, const Member& b) { return a.vm < b.vm; });
    return g;
  }
};

TEST(Controller, InstallReportsSwitchesWithState) {
  Fig3World w;
  Controller c(w.topo, w.placement, Fig3Example::shared_config(0, 1));
  const UpdateDiff d = c.install_group(w.fig3_group(0));
  EXPECT_EQ(d.leaves, (std::vector<std::uint32_t>{6, 7}));
  EXPECT_EQ(d.spines, (std::vector<std::uint32_t>{6, 7}));
  EXPECT_EQ(d.hypervisors.size(), 19u);
  EXPECT_EQ(c.ledger().occupancy(Layer::kLeaf, 6), 1u);
  EXPECT_THROW(c.install_group(w.fig3_group(0)), InvalidArgument);
  const auto rep = c.simulate(0, 8);
  EXPECT_EQ(rep.delivered, expected_receivers(c.group(0).tree, 8));
  EXPECT_FALSE(c.dump(0).empty());

  // The second group finds L6 and L7 full and falls back to the default.
  const UpdateDiff d2 = c.install_group(w.fig3_group(1));
  EXPECT_TRUE(d2.leaves.empty());
  EXPECT_FALSE(c.group(1).enc.covered());
  EXPECT_TRUE(c.simulate(1, 8).missing.empty());
}

TEST(Controller, SendersOnlyGroupHasNoSwitchState) {
  Fig3World w;
  Controller c(w.topo, w.placement, Fig3Example::shared_config(0, 4));
  GroupSpec g{0, 0, {{0, Role::kSender}, {20, Role::kSender}, {40, Role::kSender},
                     {50, Role::kSender}, {60, Role::kSender}}};
  const UpdateDiff d = c.install_group(g);
  EXPECT_TRUE(d.leaves.empty());
  EXPECT_TRUE(d.spines.empty());
  EXPECT_EQ(d.hypervisors.size(), 5u);
  EXPECT_TRUE(c.simulate(0, 0).delivered.empty());
}

TEST(Controller, JoinThenLeaveRestoresState) {
  Fig3World w;
  Controller c(w.topo, w.placement, Fig3Example::shared_config(0, 1));
  c.install_group(w.fig3_group(0));
  const std::string before = c.dump(0);
  const auto occ6 = c.ledger().occupancy(Layer::kLeaf, 6);
  const UpdateDiff j = c.apply_event({0, ChurnKind::kJoin, 30, Role::kReceiver});
  EXPECT_FALSE(j.empty());
  EXPECT_THROW(c.apply_event({0, ChurnKind::kJoin, 30, Role::kBoth}),
               InvalidArgument);
  EXPECT_TRUE(c.simulate(0, 8).missing.empty());
  c.apply_event({0, ChurnKind::kLeave, 30, Role::kReceiver});
  EXPECT_EQ(c.dump(0), before);
  EXPECT_EQ(c.ledger().occupancy(Layer::kLeaf, 6), occ6);
}

TEST(Controller, LocalJoinTouchesOnlyHypervisors) {
  Fig3World w;
  Controller c(w.topo, w.placement, Fig3Example::shared_config(0));
  c.install_group(w.fig3_group(0));
  // Host 9 shares L1 with the only sender: no downstream layer changes.
  const UpdateDiff d = c.apply_event({0, ChurnKind::kJoin, 9, Role::kReceiver});
  EXPECT_TRUE(d.leaves.empty());
  EXPECT_TRUE(d.spines.empty());
  EXPECT_EQ(d.hypervisors, (std::vector<HostId>{8, 9}));
}

struct SmallWorld {
  Topology topo{TopologySpec{2, 2, 4, 8, 4}};
  Placement placement;
  std::vector<GroupSpec> groups;
  SmallWorld() {
    const auto sizes = sample_tenant_sizes(6, 3, {10, 10.0, 40});
    PlacementConfig pc;
    pc.max_per_leaf = 2;
    placement = place_tenants(topo, sizes, pc);
    groups = assign_groups(placement, 60, SizeDistribution::kUniform, 4);
  }
};

std::vector<std::string> replay(const SmallWorld& w, std::size_t cache,
                                const std::vector<ChurnEvent>& events) {
  EncodingConfig cfg;
  cfg.r = 2;
  cfg.leaf = {2, 2};
  cfg.spine = {1, 2};
  cfg.f_max = 3;
  Controller c(w.topo, w.placement, cfg);
  c.set_cache_limit(cache);
  std::vector<std::string> log;
  for (const auto& g : w.groups) c.install_group(g);
  UpdateLog ulog(w.topo);
  for (const auto& ev : events) {
    const std::size_t size = c.group(ev.group).spec.members.size();
    const UpdateDiff d = c.apply_event(ev);
    ulog.record(d, ev.kind, size);
    std::string s;
    for (auto h : d.hypervisors) s += "h" + std::to_string(h);
    for (auto l : d.leaves) s += "l" + std::to_string(l);
    for (auto sp : d.spines) s += "s" + std::to_string(sp);
    const auto& st = c.group(ev.group);
    for (HostId src : st.tree.senders) {
      const auto rep = c.simulate(ev.group, src);
      EXPECT_TRUE(rep.missing.empty());
      EXPECT_TRUE(rep.duplicates.empty());
    }
    log.push_back(s + "|" + c.dump(ev.group));
  }
  for (std::uint32_t l = 0; l < w.topo.num_leaves(); ++l) {
    log.push_back(std::to_string(c.ledger().occupancy(Layer::kLeaf, l)));
  }
  EXPECT_EQ(ulog.events(), events.size());
  return log;
}

TEST(Controller, ReplayIsDeterministicAndCacheIndependent) {
  const SmallWorld w;
  const auto events = generate_churn(w.groups, w.placement, 300, 8);
  const auto a = replay(w, static_cast<std::size_t>(-1), events);
  EXPECT_EQ(a, replay(w, static_cast<std::size_t>(-1), events));
  EXPECT_EQ(a, replay(w, 1, events));
  EXPECT_EQ(a, replay(w, 7, events));
}

TEST(Controller, UnusedCoreFailureImpactsNothing) {
  Fig3World w;
  Controller c(w.topo, w.placement, Fig3Example::shared_config(0));
  // Pod-local group: no core on any path.
  c.install_group({0, 0, {{0, Role::kBoth}, {3, Role::kBoth}, {9, Role::kReceiver},
                          {12, Role::kReceiver}, {15, Role::kSender}}});
  const FailureReport r = c.apply_failure({Layer::kCore, 0});
  EXPECT_EQ(r.groups_total, 1u);
  EXPECT_EQ(r.impacted_groups, 0u);
  EXPECT_TRUE(r.diff.empty());
}

TEST(Controller, SpineFailureReroutesAndDelivers) {
  Fig3World w;
  // The single sender hashes onto one plane; only that plane's spine in a
  // receiver pod impacts the group.
  int impacted = 0;
  for (std::uint32_t plane = 0; plane < 2; ++plane) {
    Controller c(w.topo, w.placement, Fig3Example::shared_config(2));
    c.install_group(w.fig3_group(0));
    const FailureReport r = c.apply_failure({Layer::kSpine, w.topo.spine(2, plane)});
    EXPECT_EQ(r.partitioned_groups, 0u);
    EXPECT_EQ(r.delivery_failures, 0u);
    if (r.impacted_groups == 0) {
      EXPECT_TRUE(r.diff.empty());
      continue;
    }
    ++impacted;
    EXPECT_EQ(r.senders_rerouted, 1u);
    EXPECT_EQ(r.diff.hypervisors, std::vector<HostId>{8});
    const auto rep = c.simulate(0, 8);
    EXPECT_TRUE(rep.missing.empty());
  }
  EXPECT_EQ(impacted, 1);
}

TEST(Controller, RateReport) {
  const Topology topo(TopologySpec::Fig3());
  UpdateLog empty(topo);
  const auto z = update_rate_report(empty, 1000);
  EXPECT_EQ(z.hypervisor.max, 0.0);
  EXPECT_EQ(z.leaf.mean, 0.0);

  UpdateLog log(topo);
  for (int i = 0; i < 10; ++i) {
    UpdateDiff d;
    d.hypervisors = {1, 2};
    d.leaves = {0};
    if (i % 2) d.hypervisors.push_back(3);
    log.record(d, i % 2 ? ChurnKind::kLeave : ChurnKind::kJoin, 10);
  }
  const auto a = update_rate_report(log, 1000);
  const auto b = update_rate_report(log, 2000);
  // 10 events at 1000/s = 0.01 s; host 1 updated 10 times.
  EXPECT_DOUBLE_EQ(a.hypervisor.max, 1000.0);
  EXPECT_DOUBLE_EQ(a.hypervisor.mean, (10 + 10 + 5) / 3.0 / 0.01);
  EXPECT_DOUBLE_EQ(b.hypervisor.max, 2 * a.hypervisor.max);
  EXPECT_DOUBLE_EQ(a.leaf.headroom, kSwitchUpdateLimit / 1000.0);
  EXPECT_DOUBLE_EQ(log.normalized(ChurnKind::kJoin).hypervisor, 0.2);
  EXPECT_DOUBLE_EQ(log.normalized(ChurnKind::kLeave).hypervisor, 0.3);
  EXPECT_DOUBLE_EQ(log.normalized_all().leaf, 0.1);
}

}  // namespace
}  // namespace srmc
