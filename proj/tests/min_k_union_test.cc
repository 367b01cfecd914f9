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

#include "srmc/min_k_union.h"

#include <gtest/gtest.h>

#include <set>

#include "srmc/error.h"
#include "srmc/rng.h"
#include "test_util.h"

namespace srmc {
namespace {

std::vector<SwitchBitmap> random_instance(Rng& rng, std::size_t n,
                                          std::size_t width) {
  std::vector<SwitchBitmap> in;
  const double density = 0.1 + 0.6 * rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    in.push_back({static_cast<std::uint32_t>(3 * i + rng.below(3)),
                  testing::random_bitmap(rng, width, density)});
  }
  return in;
}

std::size_t union_of(const std::vector<SwitchBitmap>& in,
                     const std::vector<std::size_t>& pick) {
  PortBitmap u(in[0].bitmap.width());
  for (std::size_t i : pick) u |= in[i].bitmap;
  return u.count();
}

TEST(MinKUnion, KOnePicksSmallestLowestId) {
  std::vector<SwitchBitmap> in{{4, PortBitmap::FromString("0110")},
                               {1, PortBitmap::FromString("0011")},
                               {7, PortBitmap::FromString("1000")},
                               {2, PortBitmap::FromString("0001")}};
  EXPECT_EQ(approx_min_k_union(1, in), (std::vector<std::size_t>{3}));
  in[3].bitmap = PortBitmap::FromString("0011");
  in[2].bitmap = PortBitmap::FromString("1100");
  // Three bitmaps of two bits: switch 1 has the lowest id.
  EXPECT_EQ(approx_min_k_union(1, in), (std::vector<std::size_t>{1}));
}

TEST(MinKUnion, RejectsBadK) {
  std::vector<SwitchBitmap> in{{0, PortBitmap(4)}};
  EXPECT_THROW(approx_min_k_union(0, in), InvalidArgument);
  EXPECT_THROW(approx_min_k_union(2, in), InvalidArgument);
}

TEST(MinKUnion, FindsIdenticalCopies) {
  Rng rng(21);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t k = rng.between(2, 4);
    const std::size_t n = rng.between(k, 12);
    auto in = random_instance(rng, n, 16);
    const PortBitmap dup = testing::random_bitmap(rng, 16, 0.3);
    std::vector<std::size_t> slots(n);
    for (std::size_t i = 0; i < n; ++i) slots[i] = i;
    rng.shuffle(slots);
    for (std::size_t i = 0; i < k; ++i) in[slots[i]].bitmap = dup;
    const auto pick = approx_min_k_union(k, in);
    EXPECT_EQ(union_of(in, pick), testing::brute_min_k_union(k, in));
  }
}

TEST(MinKUnion, ValidSubsetNeverBelowOptimum) {
  Rng rng(8);
  double worst = 1.0;
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t k = rng.between(1, 4);
    const std::size_t n = rng.between(k, 12);
    const auto in = random_instance(rng, n, rng.between(4, 24));
    const auto pick = approx_min_k_union(k, in);
    ASSERT_EQ(pick.size(), k);
    EXPECT_TRUE(std::is_sorted(pick.begin(), pick.end()));
    EXPECT_EQ(std::set<std::size_t>(pick.begin(), pick.end()).size(), k);
    EXPECT_LT(pick.back(), n);
    const std::size_t opt = testing::brute_min_k_union(k, in);
    const std::size_t got = union_of(in, pick);
    EXPECT_GE(got, opt);
    if (k == 1) {
      EXPECT_EQ(got, opt);
    }
    if (opt > 0) worst = std::max(worst, static_cast<double>(got) / opt);
  }
  RecordProperty("worst_ratio", std::to_string(worst));
}

TEST(MinKUnion, PoolRestrictsCandidates) {
  std::vector<SwitchBitmap> in{{0, PortBitmap::FromString("0001")},
                               {1, PortBitmap::FromString("1111")},
                               {2, PortBitmap::FromString("0011")},
                               {3, PortBitmap::FromString("0001")}};
  const std::vector<std::size_t> pool{1, 2, 3};
  EXPECT_EQ(approx_min_k_union(2, in, pool), (std::vector<std::size_t>{2, 3}));
}

}  // namespace
}  // namespace srmc
