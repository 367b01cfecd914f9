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

#include "srmc/dataplane.h"

#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "srmc/error.h"
#include "srmc/fig3.h"
#include "srmc/oracle.h"
#include "srmc/rng.h"
#include "srmc/wire.h"
#include "test_util.h"

namespace srmc {
namespace {

EncodingConfig random_config(Rng& rng) {
  EncodingConfig cfg;
  cfg.r = static_cast<std::uint32_t>(rng.below(5));
  cfg.leaf = {static_cast<std::uint32_t>(rng.below(4)),
              static_cast<std::uint32_t>(rng.between(1, 3))};
  cfg.spine = {static_cast<std::uint32_t>(rng.below(3)),
               static_cast<std::uint32_t>(rng.between(1, 2))};
  cfg.f_max = rng.below(3) == 0 ? kUnbounded
                                : static_cast<std::uint32_t>(rng.below(3));
  return cfg;
}

// Distinct links of one shortest path per receiver, always through spine
// plane 0 and the first core of that plane.
std::uint64_t steiner_links(const Topology& topo, const MulticastTree& tree,
                            HostId source) {
  std::set<std::tuple<int, std::uint32_t, std::uint32_t>> links;
  const std::uint32_t sl = topo.leaf_of_host(source);
  const std::uint32_t sp = topo.pod_of_leaf(sl);
  for (HostId r : tree.receivers) {
    if (r == source) continue;
    const std::uint32_t l = topo.leaf_of_host(r);
    const std::uint32_t p = topo.pod_of_leaf(l);
    links.insert({0, source, sl});
    links.insert({5, l, r});
    if (l == sl) continue;
    links.insert({1, sl, topo.spine(sp, 0)});
    links.insert({4, topo.spine(p, 0), l});
    if (p == sp) continue;
    links.insert({2, topo.spine(sp, 0), 0});
    links.insert({3, 0, topo.spine(p, 0)});
  }
  return links.size();
}

TEST(Dataplane, DeliveryMatchesPerHostBruteForce) {
  Rng rng(31);
  int exact_cases = 0;
  for (int iter = 0; iter < 600; ++iter) {
    const Topology topo(testing::random_small_spec(rng));
    const auto members = testing::random_members(
        topo, rng, static_cast<std::uint32_t>(rng.between(2, topo.num_hosts())));
    const auto tree = compute_tree(topo, 7, members);
    EncodingConfig cfg = random_config(rng);
    const bool exact = iter % 2 == 0;
    if (exact) {
      cfg.r = 0;
      cfg.f_max = kUnbounded;
    }
    SRuleLedger ledger(topo, cfg.f_max);
    const auto enc = encode_layers(tree, cfg, ledger);
    const GroupSRules srules(topo, enc, tree.group);
    const auto layout = WireLayout::For(topo, cfg);
    for (HostId s : tree.senders) {
      const auto rep = simulate_group(topo, tree, enc, srules, layout, s);
      const auto want = testing::brute_force_delivery(topo, tree, enc, s);
      ASSERT_EQ(rep.delivered, want) << "iter " << iter << " source " << s;
      EXPECT_TRUE(rep.missing.empty());
      EXPECT_TRUE(rep.duplicates.empty());
      EXPECT_EQ(rep.revisits, 0u);
      EXPECT_EQ(rep.delivered, reference_delivery(topo, tree, enc, s));
      const auto rx = expected_receivers(tree, s);
      EXPECT_EQ(rep.spurious.size(), rep.delivered.size() - rx.size());
      EXPECT_GE(rep.link_packets, steiner_links(topo, tree, s));
      if (exact) {
        EXPECT_EQ(rep.delivered, rx);
        EXPECT_EQ(rep.link_packets, steiner_links(topo, tree, s));
        EXPECT_EQ(rep.link_packets,
                  baseline_packets(topo, tree, s, Baseline::kIdeal));
        ++exact_cases;
      }
    }
  }
  EXPECT_GT(exact_cases, 100);
}

TEST(Dataplane, BaselinesAgainstHopCounts) {
  const Fig3Example ex;
  const auto& t = ex.tree;
  std::uint64_t unicast = 0;
  for (HostId r : t.receivers) unicast += ex.topo.hops(ex.sender, r);
  EXPECT_EQ(baseline_packets(ex.topo, t, ex.sender, Baseline::kUnicast), unicast);
  EXPECT_EQ(unicast, 4u * 4 + 14u * 6);
  // L0 is in the source pod: 4 hops to the relay; the other three leaves
  // are 6 hops away; every further receiver costs 2 links.
  EXPECT_EQ(baseline_packets(ex.topo, t, ex.sender, Baseline::kOverlay),
            4u + 3 * 6 + 2u * (18 - 4));
  // host-leaf, leaf-spine, spine-core, 2 core-spine, 4 spine-leaf, 18 leaf-host
  EXPECT_EQ(baseline_packets(ex.topo, t, ex.sender, Baseline::kIdeal),
            1u + 1 + 1 + 2 + 4 + 18);
  EXPECT_EQ(steiner_links(ex.topo, t, ex.sender), 27u);
}

TEST(Dataplane, HeaderBytesShrinkAlongThePath) {
  const Fig3Example ex;
  const EncodingConfig cfg = Fig3Example::shared_config(2);
  SRuleLedger ledger(ex.topo, kUnbounded);
  const auto enc = encode_layers(ex.tree, cfg, ledger);
  const GroupSRules srules(ex.topo, enc, 0);
  const auto layout = WireLayout::For(ex.topo, cfg);
  const auto rep = simulate_group(ex.topo, ex.tree, enc, srules, layout, ex.sender);
  EXPECT_EQ(rep.missing.size(), 0u);
  EXPECT_GT(rep.header_bytes, 0u);
  EXPECT_LT(rep.header_bytes, 13u * rep.link_packets);
  EXPECT_EQ(rep.bytes(100), rep.link_packets * 100 + rep.header_bytes);
}

TEST(Dataplane, SRuleTablesEnforceCapacity) {
  const Topology topo(TopologySpec::Fig3());
  SRuleTables t(topo, 1);
  t.install({Layer::kLeaf, 2}, 5, PortBitmap(8));
  EXPECT_THROW(t.install({Layer::kLeaf, 2}, 6, PortBitmap(8)), InvariantViolation);
  EXPECT_NE(t.lookup({Layer::kLeaf, 2}, 5), nullptr);
  EXPECT_EQ(t.lookup({Layer::kLeaf, 2}, 6), nullptr);
  EXPECT_TRUE(t.remove({Layer::kLeaf, 2}, 5));
  EXPECT_FALSE(t.remove({Layer::kLeaf, 2}, 5));
  EXPECT_EQ(t.size({Layer::kLeaf, 2}), 0u);
}

TEST(Dataplane, SwitchWithoutRuleDrops) {
  const Topology topo(TopologySpec::Fig3());
  const WireLayout layout = WireLayout::For(topo.logical(), 2, 2);
  const SRuleTables none(topo);
  ForwardContext ctx{&topo, &layout, &none, nullptr, 3, 0};
  PacketHeader h;
  h.at(Section::kDownstreamLeaf).push_back(
      {RuleKind::kDownstream, false, {4}, PortBitmap::FromString("10000000")});
  const auto bytes = encode_header(h, layout);
  const auto miss = forward_at_switch(ctx, {Layer::kLeaf, 5}, Arrival::kFromAbove, bytes);
  EXPECT_EQ(miss.source, ForwardResult::Source::kDrop);
  const auto hit = forward_at_switch(ctx, {Layer::kLeaf, 4}, Arrival::kFromAbove, bytes);
  EXPECT_EQ(hit.source, ForwardResult::Source::kPRule);
  EXPECT_EQ(hit.down_ports, std::vector<std::uint32_t>{0});
}

}  // namespace
}  // namespace srmc
