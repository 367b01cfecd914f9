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

#include "srmc/topology.h"

#include <gtest/gtest.h>

#include <deque>
#include <vector>

#include "srmc/error.h"
#include "srmc/rng.h"
#include "test_util.h"

namespace srmc {
namespace {

TEST(Topology, FabricCounts) {
  const Topology t(TopologySpec::Fabric());
  EXPECT_EQ(t.num_hosts(), 27648u);
  EXPECT_EQ(t.num_leaves(), 576u);
  EXPECT_EQ(t.num_spines(), 48u);
  EXPECT_EQ(t.num_cores(), 16u);
  EXPECT_EQ(t.port_count(Layer::kLeaf), 52u);
  EXPECT_EQ(t.port_count(Layer::kSpine), 52u);
  EXPECT_EQ(t.downstream_width(Layer::kCore), 12u);
  EXPECT_EQ(t.logical().leaf_id_bits, 10u);
}

TEST(Topology, Fig3Counts) {
  const Topology t(TopologySpec::Fig3());
  EXPECT_EQ(t.num_hosts(), 64u);
  EXPECT_EQ(t.num_leaves(), 8u);
  EXPECT_EQ(t.num_spines(), 8u);
  EXPECT_EQ(t.cores_per_plane(), 2u);
}

TEST(Topology, IdBits) {
  EXPECT_EQ(id_bits_for(1), 1u);
  EXPECT_EQ(id_bits_for(2), 1u);
  EXPECT_EQ(id_bits_for(3), 2u);
  EXPECT_EQ(id_bits_for(8), 3u);
  EXPECT_EQ(id_bits_for(9), 4u);
  EXPECT_EQ(id_bits_for(576), 10u);
}

TEST(Topology, RejectsBadSpecs) {
  TopologySpec s = TopologySpec::Fig3();
  s.cores = 3;  // not a multiple of the plane count
  EXPECT_THROW(Topology{s}, InvalidArgument);
  s = TopologySpec::Fig3();
  s.num_pods = 0;
  EXPECT_THROW(Topology{s}, InvalidArgument);
  const Topology t(TopologySpec::Fig3());
  EXPECT_THROW(t.check({Layer::kCore, 4}), InvalidArgument);
  EXPECT_NO_THROW(t.check({Layer::kSpine, 7}));
}

TEST(Topology, IndexHelpersRoundTrip) {
  const Topology t(TopologySpec::Fabric());
  for (HostId h = 0; h < t.num_hosts(); h += 37) {
    EXPECT_EQ(t.host(t.leaf_of_host(h), t.host_port(h)), h);
    const std::uint32_t l = t.leaf_of_host(h);
    EXPECT_EQ(t.leaf(t.pod_of_leaf(l), t.leaf_index_in_pod(l)), l);
  }
  for (std::uint32_t s = 0; s < t.num_spines(); ++s) {
    EXPECT_EQ(t.spine(t.spine_pod(s), t.spine_plane(s)), s);
  }
  for (std::uint32_t c = 0; c < t.num_cores(); ++c) {
    EXPECT_EQ(t.core(t.core_plane(c), t.core_index_in_plane(c)), c);
  }
}

// Shortest paths on the explicit physical graph.
std::vector<std::uint32_t> bfs_from(const Topology& t, HostId src) {
  const std::uint32_t H = t.num_hosts(), L = t.num_leaves(),
                      S = t.num_spines(), C = t.num_cores();
  std::vector<std::vector<std::uint32_t>> adj(H + L + S + C);
  auto link = [&](std::uint32_t a, std::uint32_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  const auto& sp = t.spec();
  for (HostId h = 0; h < H; ++h) link(h, H + h / sp.hosts_per_leaf);
  for (std::uint32_t l = 0; l < L; ++l) {
    const std::uint32_t pod = l / sp.leaves_per_pod;
    for (std::uint32_t j = 0; j < sp.spines_per_pod; ++j) {
      link(H + l, H + L + pod * sp.spines_per_pod + j);
    }
  }
  const std::uint32_t per_plane = C / sp.spines_per_pod;
  for (std::uint32_t s = 0; s < S; ++s) {
    const std::uint32_t plane = s % sp.spines_per_pod;
    for (std::uint32_t i = 0; i < per_plane; ++i) {
      link(H + L + s, H + L + S + plane * per_plane + i);
    }
  }
  std::vector<std::uint32_t> dist(adj.size(), ~0u);
  std::deque<std::uint32_t> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    const std::uint32_t u = q.front();
    q.pop_front();
    for (std::uint32_t v : adj[u]) {
      if (dist[v] == ~0u) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

TEST(Topology, HopsMatchBreadthFirstSearch) {
  Rng rng(3);
  for (int iter = 0; iter < 40; ++iter) {
    TopologySpec spec = testing::random_small_spec(rng);
    spec.num_pods = static_cast<std::uint32_t>(rng.between(1, 4));
    const Topology t(spec);
    const HostId src = static_cast<HostId>(rng.below(t.num_hosts()));
    const auto dist = bfs_from(t, src);
    for (HostId h = 0; h < t.num_hosts(); ++h) {
      EXPECT_EQ(t.hops(src, h), dist[h]) << spec.to_string();
    }
  }
}

TEST(Topology, DownstreamPortsIgnoreOtherSwitches) {
  const Topology t(TopologySpec::Fig3());
  const std::vector<HostId> members{3, 5, 6, 7, 40};
  const PortBitmap l0 = t.downstream_ports({Layer::kLeaf, 0}, members);
  EXPECT_EQ(l0.width(), t.port_count(Layer::kLeaf));
  EXPECT_EQ(l0.slice(0, 8).to_string(), "00010111");
  const PortBitmap up = t.upstream_ports({Layer::kLeaf, 0});
  EXPECT_EQ(up.count(), 2u);
  EXPECT_TRUE(up.test(8));
}

}  // namespace
}  // namespace srmc
