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

#include "srmc/workload.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "srmc/error.h"
#include "srmc/placement.h"

namespace srmc {
namespace {

struct SizeStats {
  double mean = 0;
  double below_61 = 0;
  double above_700 = 0;
};

SizeStats stats_of(const std::vector<std::uint32_t>& s) {
  SizeStats out;
  for (auto v : s) {
    out.mean += v;
    out.below_61 += v < 61;
    out.above_700 += v > 700;
  }
  const double n = static_cast<double>(s.size());
  out.mean /= n;
  out.below_61 /= n;
  out.above_700 /= n;
  return out;
}

TEST(Workload, WveMatchesPublishedSummaryBands) {
  for (std::uint32_t tenant : {1364u, 5000u}) {
    const auto sizes =
        sample_group_sizes(SizeDistribution::kWve, tenant, 100000, 42);
    for (auto v : sizes) {
      ASSERT_GE(v, kMinGroupSize);
      ASSERT_LE(v, tenant);
    }
    const SizeStats s = stats_of(sizes);
    EXPECT_GE(s.mean, 54.0) << tenant;
    EXPECT_LE(s.mean, 66.0) << tenant;
    EXPECT_GE(s.below_61, 0.75);
    EXPECT_LE(s.below_61, 0.85);
    EXPECT_GE(s.above_700, 0.002);
    EXPECT_LE(s.above_700, 0.012);
  }
}

// Closed form of the mixture, independent of the lookup table.
double wve_cdf_closed_form(std::uint32_t s) {
  using W = WveDistribution;
  const double y = static_cast<double>(s) - 4.0;  // size <= s  <=>  Y < s-4
  const double body =
      0.5 * std::erfc(-(std::log(y) - W::kMu) / (W::kSigma * std::sqrt(2.0)));
  double tail = std::log(y / W::kTailLo) / std::log(W::kTailHi / W::kTailLo);
  tail = std::clamp(tail, 0.0, 1.0);
  return (1 - W::kTailWeight) * body + W::kTailWeight * tail;
}

TEST(Workload, WveCdfMatchesClosedForm) {
  const auto& w = WveDistribution::Get();
  double prev = 0;
  for (std::uint32_t s = 5; s < 5000; s += 7) {
    EXPECT_NEAR(w.cdf(s), wve_cdf_closed_form(s), 1e-9) << s;
    EXPECT_GE(w.cdf(s), prev);
    prev = w.cdf(s);
  }
  EXPECT_DOUBLE_EQ(w.cdf(5000), 1.0);
}

TEST(Workload, UniformSizes) {
  const auto five = sample_group_sizes(SizeDistribution::kUniform, 5, 1000, 1);
  for (auto v : five) EXPECT_EQ(v, 5u);
  const auto s = sample_group_sizes(SizeDistribution::kUniform, 105, 100000, 3);
  EXPECT_NEAR(stats_of(s).mean, 55.0, 2.0);
  EXPECT_THROW(sample_group_sizes(SizeDistribution::kUniform, 4, 1, 1),
               InvalidArgument);
}

TEST(Workload, TenantSizesHitTargetMean) {
  const auto s = sample_tenant_sizes(3000, 7);
  double mean = 0;
  for (auto v : s) {
    EXPECT_GE(v, 10u);
    EXPECT_LE(v, 5000u);
    mean += v;
  }
  mean /= static_cast<double>(s.size());
  EXPECT_NEAR(mean, 10 + 168.7705, 3.0);
  EXPECT_EQ(s, sample_tenant_sizes(3000, 7));
}

TEST(Workload, ApportionIsProportional) {
  const std::vector<std::uint32_t> two{100, 300};
  EXPECT_EQ(apportion(two, 40), (std::vector<std::uint64_t>{10, 30}));
  const std::vector<std::uint32_t> small{4, 10, 10};
  EXPECT_EQ(apportion(small, 3), (std::vector<std::uint64_t>{0, 2, 1}));
  const auto sizes = sample_tenant_sizes(3000, 1);
  const auto counts = apportion(sizes, 1000000);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}),
            1000000u);
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    EXPECT_LE(std::fabs(counts[i] - 1e6 * sizes[i] / total), 1.0);
  }
}

Placement toy_placement(std::vector<std::uint32_t> sizes) {
  const Topology topo({2, 1, 8, 16, 1});
  std::vector<HostId> hosts;
  for (auto s : sizes) {
    for (std::uint32_t i = 0; i < s; ++i) hosts.push_back(i);
  }
  return Placement(topo, std::move(sizes), std::move(hosts), 20);
}

TEST(Workload, GroupMembersAreValid) {
  const Placement pl = toy_placement({100, 30, 7});
  const auto groups = assign_groups(pl, 500, SizeDistribution::kWve, 9);
  ASSERT_EQ(groups.size(), 500u);
  std::map<TenantId, int> per_tenant;
  std::array<std::uint64_t, 4> roles{};
  for (const auto& g : groups) {
    ++per_tenant[g.tenant];
    const Tenant& t = pl.tenant(g.tenant);
    ASSERT_GE(g.members.size(), kMinGroupSize);
    ASSERT_LE(g.members.size(), t.size);
    bool send = false, recv = false;
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      const auto& m = g.members[i];
      EXPECT_GE(m.vm, t.first_vm);
      EXPECT_LT(m.vm, t.first_vm + t.size);
      if (i) {
        EXPECT_LT(g.members[i - 1].vm, m.vm);
      }
      send |= can_send(m.role);
      recv |= can_receive(m.role);
      ++roles[static_cast<int>(m.role)];
    }
    EXPECT_TRUE(send && recv);
  }
  EXPECT_EQ(per_tenant[0], 365);
  EXPECT_EQ(per_tenant[1], 109);
  EXPECT_EQ(per_tenant[2], 26);
  // Roles are uniform up to the sender/receiver fix-up.
  const double total = static_cast<double>(roles[1] + roles[2] + roles[3]);
  for (int r = 1; r <= 3; ++r) EXPECT_NEAR(roles[r] / total, 1.0 / 3, 0.02);
  EXPECT_EQ(groups[17].members,
            assign_groups(pl, 500, SizeDistribution::kWve, 9)[17].members);
}

TEST(Workload, SingleTenantOwnsEverything) {
  const Placement pl = toy_placement({12});
  for (const auto& g : assign_groups(pl, 50, SizeDistribution::kUniform, 1)) {
    EXPECT_EQ(g.tenant, 0u);
  }
}

TEST(Workload, ChurnReplaysAndIsProportional) {
  const Placement pl = toy_placement({200});
  std::vector<GroupSpec> groups(2);
  Rng rng(1);
  groups[0].id = 0;
  groups[0].members = sample_members(pl.tenant(0), 10, rng);
  groups[1].id = 1;
  groups[1].members = sample_members(pl.tenant(0), 90, rng);
  const auto events = generate_churn(groups, pl, 10000, 5);
  ASSERT_EQ(events.size(), 10000u);
  std::array<int, 2> count{};
  std::array<int, 2> kinds{};
  auto members = groups;
  for (const auto& ev : events) {
    ++count[ev.group];
    ++kinds[static_cast<int>(ev.kind)];
    ASSERT_NO_THROW(apply_membership(members[ev.group].members, ev));
    ASSERT_GE(members[ev.group].members.size(), kMinGroupSize);
  }
  // Multinomial with p = 0.1: sd = 30.
  EXPECT_NEAR(count[0], 1000, 150);
  EXPECT_NEAR(kinds[0], 5000, 300);
  EXPECT_EQ(events, generate_churn(groups, pl, 10000, 5));
}

TEST(Workload, ChurnOnMinimumGroupOnlyJoins) {
  const Placement pl = toy_placement({40});
  std::vector<GroupSpec> groups(1);
  Rng rng(2);
  groups[0].members = sample_members(pl.tenant(0), 5, rng);
  const auto events = generate_churn(groups, pl, 10, 3);
  ASSERT_EQ(events.size(), 10u);
  EXPECT_EQ(events[0].kind, ChurnKind::kJoin);
  for (const auto& ev : events) EXPECT_EQ(ev.group, 0u);
}

TEST(Workload, InvalidMembershipEventsThrow) {
  std::vector<Member> m{{1, Role::kBoth}, {2, Role::kSender}};
  EXPECT_THROW(apply_membership(m, {0, ChurnKind::kJoin, 1, Role::kBoth}),
               InvalidArgument);
  EXPECT_THROW(apply_membership(m, {0, ChurnKind::kLeave, 3, Role::kBoth}),
               InvalidArgument);
  apply_membership(m, {0, ChurnKind::kJoin, 0, Role::kReceiver});
  EXPECT_EQ(m.front().vm, 0u);
}

}  // namespace
}  // namespace srmc
