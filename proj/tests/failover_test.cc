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

#include "srmc/failover.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "srmc/dataplane.h"
#include "srmc/encode.h"
#include "srmc/error.h"
#include "srmc/rng.h"
#include "srmc/wire.h"
#include "test_util.h"

namespace srmc {
namespace {

std::size_t brute_min_cover(const std::vector<std::vector<bool>>& c,
                            std::size_t n, const std::vector<bool>& coverable) {
  std::size_t best = c.size() + 1;
  for (std::uint32_t mask = 0; mask < (1u << c.size()); ++mask) {
    std::vector<bool> cov(n, false);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t e = 0; e < n; ++e) cov[e] = cov[e] || c[i][e];
    }
    if (cov == coverable) {
      best = std::min<std::size_t>(best, std::popcount(mask));
    }
  }
  return best;
}

TEST(Failover, GreedySetCoverAgainstExhaustive) {
  Rng rng(55);
  for (int iter = 0; iter < 400; ++iter) {
    const std::size_t m = rng.between(1, 9), n = rng.between(1, 12);
    std::vector<std::vector<bool>> c(m, std::vector<bool>(n));
    for (auto& row : c) {
      for (std::size_t e = 0; e < n; ++e) row[e] = rng.below(3) == 0;
    }
    std::vector<bool> coverable(n, false);
    for (const auto& row : c) {
      for (std::size_t e = 0; e < n; ++e) coverable[e] = coverable[e] || row[e];
    }
    std::vector<std::size_t> uncovered;
    const auto picks = greedy_set_cover(c, n, &uncovered);
    std::vector<bool> cov(n, false);
    for (auto p : picks) {
      bool gain = false;
      for (std::size_t e = 0; e < n; ++e) {
        gain = gain || (c[p][e] && !cov[e]);
        cov[e] = cov[e] || c[p][e];
      }
      EXPECT_TRUE(gain);
    }
    EXPECT_EQ(cov, coverable);
    for (auto e : uncovered) EXPECT_FALSE(coverable[e]);
    const std::size_t opt = brute_min_cover(c, n, coverable);
    EXPECT_GE(picks.size(), opt);
    // ln(n) + 1 bound of the greedy cover.
    EXPECT_LE(static_cast<double>(picks.size()),
              static_cast<double>(opt) * (std::log(static_cast<double>(n)) + 1) + 1e-9);
  }
}

// Receivers that some combination of live switches can still reach.
std::vector<HostId> unreachable_oracle(const Topology& topo,
                                       const MulticastTree& tree, HostId source,
                                       const FailureSet& f) {
  const std::uint32_t sl = topo.leaf_of_host(source), sp = topo.pod_of_leaf(sl);
  const std::uint32_t planes = topo.spec().spines_per_pod;
  std::vector<HostId> out;
  for (HostId r : tree.receivers) {
    if (r == source || topo.leaf_of_host(r) == sl) continue;
    const std::uint32_t p = topo.pod_of_host(r);
    bool ok = false;
    for (std::uint32_t j = 0; j < planes && !ok; ++j) {
      if (f.spine_failed(topo.spine(sp, j))) continue;
      if (p == sp) {
        ok = true;
        continue;
      }
      bool core = false;
      for (std::uint32_t u = 0; u < topo.cores_per_plane(); ++u) {
        core = core || !f.core_failed(topo.core(j, u));
      }
      ok = core && !f.spine_failed(topo.spine(p, j));
    }
    if (!ok) out.push_back(r);
  }
  return out;
}

TEST(Failover, PlannerReachesEverythingReachable) {
  Rng rng(66);
  std::uint64_t reroutes = 0;
  for (int iter = 0; iter < 400; ++iter) {
    TopologySpec spec = testing::random_small_spec(rng);
    spec.num_pods = static_cast<std::uint32_t>(rng.between(2, 4));
    const Topology topo(spec);
    const auto members = testing::random_members(
        topo, rng, static_cast<std::uint32_t>(rng.between(2, 30)));
    const auto tree = compute_tree(topo, 3, members);
    FailureSet f(topo);
    const int fails = static_cast<int>(rng.between(1, 3));
    for (int i = 0; i < fails; ++i) {
      if (rng.below(2)) {
        f.fail({Layer::kSpine, static_cast<std::uint32_t>(rng.below(topo.num_spines()))});
      } else {
        f.fail({Layer::kCore, static_cast<std::uint32_t>(rng.below(topo.num_cores()))});
      }
    }
    EncodingConfig cfg;
    cfg.leaf = {4, 2};
    cfg.spine = {2, 2};
    SRuleLedger ledger(topo, kUnbounded);
    const auto enc = encode_layers(tree, cfg, ledger);
    const GroupSRules srules(topo, enc, tree.group);
    const auto layout = WireLayout::For(topo, cfg);
    const FailoverPlanner planner(topo, tree, f);
    for (HostId s : tree.senders) {
      const FailoverResult res = planner.plan(s);
      EXPECT_EQ(res.multipath_kept, planner.multipath_kept(s));
      EXPECT_EQ(res.rules, compute_upstream_failover(topo, tree, s, f).rules);
      const auto lost = unreachable_oracle(topo, tree, s, f);
      EXPECT_EQ(res.unreachable, lost) << "iter " << iter;
      reroutes += !res.multipath_kept;
      const auto rep = simulate_group(topo, tree, enc, srules, layout, s, &f,
                                      &res.rules);
      for (HostId m : rep.missing) {
        EXPECT_TRUE(std::binary_search(lost.begin(), lost.end(), m))
            << "iter " << iter << " source " << s << " missing " << m;
      }
    }
  }
  EXPECT_GT(reroutes, 0u);
}

TEST(Failover, NoFailuresKeepsMultipath) {
  const Topology topo(TopologySpec::Fig3());
  const std::vector<HostMember> m{{0, Role::kSender}, {40, Role::kReceiver}};
  const auto tree = compute_tree(topo, 0, m);
  const FailureSet none(topo);
  const auto res = compute_upstream_failover(topo, tree, 0, none);
  EXPECT_TRUE(res.multipath_kept);
  EXPECT_EQ(res.rules, default_upstream(topo, tree, 0));
}

TEST(Failover, CoreLossOnOnePlaneMovesTraffic) {
  const Topology topo(TopologySpec::Fig3());
  const std::vector<HostMember> m{{0, Role::kSender}, {40, Role::kReceiver}};
  const auto tree = compute_tree(topo, 0, m);
  FailureSet f(topo);
  f.fail({Layer::kCore, 0});
  EXPECT_TRUE(compute_upstream_failover(topo, tree, 0, f).multipath_kept);
  f.fail({Layer::kCore, 1});  // plane 0 has no live core left
  const auto res = compute_upstream_failover(topo, tree, 0, f);
  EXPECT_FALSE(res.multipath_kept);
  EXPECT_FALSE(res.rules.leaf.bitmap.test(8));
  EXPECT_TRUE(res.rules.leaf.bitmap.test(9));
  EXPECT_TRUE(res.unreachable.empty());
}

TEST(Failover, FailureSetRejectsLeaves) {
  const Topology topo(TopologySpec::Fig3());
  FailureSet f(topo);
  EXPECT_THROW(f.fail({Layer::kLeaf, 0}), InvalidArgument);
  EXPECT_THROW(f.fail({Layer::kCore, 9}), InvalidArgument);
  f.fail({Layer::kSpine, 1});
  EXPECT_TRUE(f.failed({Layer::kSpine, 1}));
  EXPECT_EQ(f.list(), (std::vector<SwitchRef>{{Layer::kSpine, 1}}));
}

}  // namespace
}  // namespace srmc
