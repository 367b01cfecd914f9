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

#include "srmc/encode.h"

#include <gtest/gtest.h>

#include <set>

#include "srmc/error.h"
#include "srmc/fig3.h"
#include "srmc/rng.h"
#include "srmc/wire.h"
#include "test_util.h"

namespace srmc {
namespace {

TEST(Tree, Fig3ApexAndLeafBitmaps) {
  const Fig3Example ex;
  EXPECT_EQ(ex.tree.apex, Layer::kCore);
  ASSERT_EQ(ex.tree.leaf_layer.size(), 4u);
  EXPECT_EQ(ex.tree.leaf_layer[0].id, 0u);
  EXPECT_EQ(ex.tree.leaf_layer[0].bitmap.to_string(), "00010111");
  EXPECT_EQ(ex.tree.leaf_layer[1].bitmap.to_string(), "11100001");
  ASSERT_EQ(ex.tree.spine_layer.size(), 2u);
  EXPECT_EQ(ex.tree.spine_layer[0].id, 2u);
  EXPECT_EQ(ex.tree.spine_layer[0].bitmap.to_string(), "01");
  EXPECT_EQ(ex.tree.spine_layer[1].bitmap.to_string(), "11");
}

TEST(Tree, ApexLayers) {
  const Topology topo(TopologySpec::Fig3());
  const std::vector<HostMember> one_leaf{{0, Role::kSender}, {3, Role::kReceiver}};
  const auto t1 = compute_tree(topo, 0, one_leaf);
  EXPECT_EQ(t1.apex, Layer::kLeaf);
  EXPECT_TRUE(t1.leaf_layer.empty());
  EXPECT_TRUE(t1.spine_layer.empty());
  const std::vector<HostMember> one_pod{{0, Role::kSender}, {9, Role::kReceiver}};
  const auto t2 = compute_tree(topo, 0, one_pod);
  EXPECT_EQ(t2.apex, Layer::kSpine);
  EXPECT_TRUE(t2.spine_layer.empty());
  EXPECT_EQ(t2.leaf_layer.size(), 1u);
  const std::vector<HostMember> senders_only{{0, Role::kSender}, {40, Role::kSender}};
  const auto t3 = compute_tree(topo, 0, senders_only);
  EXPECT_FALSE(t3.has_receivers());
  EXPECT_TRUE(t3.leaf_layer.empty());
  const std::vector<HostMember> dup{{0, Role::kSender}, {0, Role::kReceiver}};
  EXPECT_THROW(compute_tree(topo, 0, dup), InvalidArgument);
}

TEST(Tree, LeafLayerCoversRemoteReceiversExactly) {
  Rng rng(6);
  for (int iter = 0; iter < 500; ++iter) {
    const Topology topo(testing::random_small_spec(rng));
    const auto members = testing::random_members(
        topo, rng, static_cast<std::uint32_t>(rng.between(2, 20)));
    const auto tree = compute_tree(topo, 0, members);
    if (tree.senders.empty()) {
      EXPECT_TRUE(tree.leaf_layer.empty());
      continue;
    }
    std::set<HostId> from_layer;
    for (const auto& sb : tree.leaf_layer) {
      sb.bitmap.for_each_set(
          [&](std::size_t p) { from_layer.insert(topo.host(sb.id, static_cast<std::uint32_t>(p))); });
    }
    std::set<std::uint32_t> sender_leaves;
    for (HostId s : tree.senders) sender_leaves.insert(topo.leaf_of_host(s));
    for (HostId r : tree.receivers) {
      const bool local_only = sender_leaves.size() == 1 &&
                              *sender_leaves.begin() == topo.leaf_of_host(r);
      EXPECT_EQ(from_layer.count(r), local_only ? 0u : 1u);
    }
    for (HostId h : from_layer) {
      EXPECT_TRUE(std::binary_search(tree.receivers.begin(), tree.receivers.end(), h));
    }
    for (HostId s : tree.senders) {
      const Layer a = sender_apex(topo, tree, s);
      EXPECT_LE(static_cast<int>(a), static_cast<int>(tree.apex));
    }
  }
}

// Example sizes counted by hand from the topology: 8 hosts and 2 uplinks per
// leaf, 2 leaves and 2 uplinks per spine, 3-bit switch ids.
TEST(Encode, Fig3ContentBits) {
  const Fig3Example ex;
  const std::size_t leaf_rule = 2 + 3 + 10, spine_rule = 2 + 3 + 4,
                    core_rule = 2 + 2 + 4;
  const std::size_t d1 = 5 * leaf_rule + 6 * spine_rule + 4 * core_rule;
  EXPECT_EQ(d1, 161u);
  EXPECT_EQ(physical_content_bits(ex.topo, ex.tree, ex.sender), d1);

  SRuleLedger l2(ex.topo, kUnbounded);
  const auto e2 = encode_layers(ex.tree, Fig3Example::unshared_config(), l2);
  const std::size_t up = (2 + 10) + (2 + 4) + (1 + 4);
  const std::size_t d2 = up + 2 * (1 + 3 + 2) + 4 * (1 + 3 + 8);
  EXPECT_EQ(d2, 83u);
  EXPECT_EQ(logical_content_bits(ex.topo, build_header(ex.topo, ex.tree, e2, ex.sender)), d2);

  SRuleLedger l3(ex.topo, kUnbounded);
  const auto e3 = encode_layers(ex.tree, Fig3Example::shared_config(2), l3);
  const std::size_t d3 = up + (1 + 6 + 2) + 2 * (1 + 6 + 8);
  EXPECT_EQ(d3, 62u);
  EXPECT_EQ(logical_content_bits(ex.topo, build_header(ex.topo, ex.tree, e3, ex.sender)), d3);
}

TEST(Encode, HeaderSectionsFollowSenderApex) {
  const Topology topo(TopologySpec::Fig3());
  const std::vector<HostMember> m{{0, Role::kBoth}, {3, Role::kReceiver},
                                  {9, Role::kBoth}, {40, Role::kReceiver}};
  const auto tree = compute_tree(topo, 1, m);
  SRuleLedger ledger(topo, kUnbounded);
  const auto enc = encode_layers(tree, Fig3Example::shared_config(0), ledger);
  const auto h = build_header(topo, tree, enc, 0);
  for (std::size_t i = 0; i < kNumSections; ++i) {
    EXPECT_TRUE(h.has(static_cast<Section>(i))) << i;
  }
  const auto up = default_upstream(topo, tree, 0);
  EXPECT_TRUE(up.leaf.multipath);
  EXPECT_TRUE(up.leaf.bitmap.test(3));
  EXPECT_TRUE(up.leaf.bitmap.test(8) && up.leaf.bitmap.test(9));
  ASSERT_TRUE(up.spine.has_value());
  EXPECT_TRUE(up.spine->bitmap.test(1));
  EXPECT_THROW(build_header(topo, tree, enc, 3), InvalidArgument);

  const std::vector<HostMember> local{{0, Role::kSender}, {3, Role::kReceiver}};
  const auto t2 = compute_tree(topo, 2, local);
  SRuleLedger l2(topo, kUnbounded);
  const auto h2 = build_header(topo, t2, encode_layers(t2, Fig3Example::shared_config(0), l2), 0);
  EXPECT_TRUE(h2.has(Section::kUpstreamLeaf));
  EXPECT_FALSE(h2.has(Section::kUpstreamSpine));
  EXPECT_FALSE(h2.at(Section::kUpstreamLeaf)[0].multipath);
}

TEST(Encode, SpineSRulesReplicatePerPhysicalSpine) {
  const Fig3Example ex;
  SRuleLedger ledger(ex.topo, 1);
  const auto enc = encode_layers(ex.tree, Fig3Example::shared_config(0, 1), ledger);
  const auto installs = s_rule_installs(ex.topo, enc);
  std::vector<SwitchRef> sw;
  for (const auto& i : installs) sw.push_back(i.sw);
  const std::vector<SwitchRef> want{{Layer::kLeaf, 6}, {Layer::kLeaf, 7},
                                    {Layer::kSpine, 6}, {Layer::kSpine, 7}};
  EXPECT_EQ(sw, want);
  EXPECT_EQ(ledger.occupancy(Layer::kSpine, 3), 1u);
}

TEST(Encode, BudgetAllocationIsTight) {
  Rng rng(10);
  for (int iter = 0; iter < 200; ++iter) {
    TopologySpec spec = testing::random_small_spec(rng);
    spec.num_pods = static_cast<std::uint32_t>(rng.between(1, 16));
    spec.hosts_per_leaf = static_cast<std::uint32_t>(rng.between(1, 64));
    const Topology topo(spec);
    const auto budget = static_cast<std::uint32_t>(rng.between(40, 400));
    const auto lk = static_cast<std::uint32_t>(rng.between(1, 4));
    const auto sk = static_cast<std::uint32_t>(rng.between(1, 4));
    const WireLayout l = WireLayout::For(topo.logical(), lk, sk);
    if (worst_case_header_bytes(l, 2, sk, 0, lk) > budget) {
      EXPECT_THROW(config_for_budget(topo, budget, 0, lk, sk), InvalidArgument);
      continue;
    }
    const EncodingConfig cfg = config_for_budget(topo, budget, 0, lk, sk);
    EXPECT_LE(worst_case_header_bytes(l, 2, sk, cfg.leaf.h_max, lk), budget);
    EXPECT_GT(worst_case_header_bytes(l, 2, sk, cfg.leaf.h_max + 1, lk), budget);
  }
}

TEST(Encode, HeadersStayWithinBudget) {
  Rng rng(12);
  const Topology topo(TopologySpec::Fabric());
  const EncodingConfig cfg = config_for_budget(topo, 325, 12);
  const WireLayout l = WireLayout::For(topo, cfg);
  for (int iter = 0; iter < 100; ++iter) {
    const auto members = testing::random_members(
        topo, rng, static_cast<std::uint32_t>(rng.between(5, 2000)));
    const auto tree = compute_tree(topo, 0, members);
    SRuleLedger ledger(topo, static_cast<std::uint32_t>(rng.below(3)));
    const auto enc = encode_layers(tree, cfg, ledger);
    for (std::size_t i = 0; i < tree.senders.size(); i += 17) {
      const auto bytes = encode_header(build_header(topo, tree, enc, tree.senders[i]), l);
      EXPECT_LE(bytes.size(), 325u);
    }
  }
}

}  // namespace
}  // namespace srmc
