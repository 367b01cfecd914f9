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

#include <algorithm>
#include <limits>

#include "srmc/error.h"

namespace srmc {

std::vector<std::size_t> approx_min_k_union(
    std::size_t k, std::span<const SwitchBitmap> all,
    std::span<const std::size_t> pool) {
  if (k == 0) throw InvalidArgument("min-k-union needs k >= 1");
  if (k > pool.size()) {
    throw InvalidArgument("min-k-union: k=" + std::to_string(k) + " but only " +
                          std::to_string(pool.size()) + " bitmaps");
  }
  const std::size_t n = pool.size();
  auto better = [&](std::size_t cost, std::size_t idx, std::size_t best_cost,
                    std::size_t best_idx) {
    if (cost != best_cost) return cost < best_cost;
    return all[idx].id < all[best_idx].id;
  };

  // Greedy.
  std::vector<std::uint8_t> taken(n, 0);
  std::vector<std::size_t> greedy;
  greedy.reserve(k);
  PortBitmap acc;
  {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (better(all[pool[i]].bitmap.count(), pool[i],
                 all[pool[best]].bitmap.count(), pool[best])) {
        best = i;
      }
    }
    taken[best] = 1;
    greedy.push_back(pool[best]);
    acc = all[pool[best]].bitmap;
  }
  std::size_t acc_count = acc.count();
  while (greedy.size() < k) {
    std::size_t best = n;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const std::size_t cost = acc.union_count(all[pool[i]].bitmap);
      if (best == n || better(cost, pool[i], best_cost, pool[best])) {
        best = i;
        best_cost = cost;
      }
    }
    taken[best] = 1;
    greedy.push_back(pool[best]);
    acc |= all[pool[best]].bitmap;
    acc_count = best_cost;
  }

  // Duplicate shortcut.
  if (k > 1 && acc_count > 0) {
    std::vector<std::size_t> order(pool.begin(), pool.end());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (!(all[a].bitmap == all[b].bitmap)) {
        return all[a].bitmap < all[b].bitmap;
      }
      return all[a].id < all[b].id;
    });
    std::size_t best_start = n, best_pop = acc_count;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && all[order[j]].bitmap == all[order[i]].bitmap) ++j;
      if (j - i >= k) {
        const std::size_t pop = all[order[i]].bitmap.count();
        if (pop < best_pop ||
            (pop == best_pop && best_start < n &&
             all[order[i]].id < all[order[best_start]].id)) {
          best_pop = pop;
          best_start = i;
        }
      }
      i = j;
    }
    if (best_start < n && best_pop < acc_count) {
      std::vector<std::size_t> dup(order.begin() + best_start,
                                   order.begin() + best_start + k);
      std::sort(dup.begin(), dup.end());
      return dup;
    }
  }
  std::sort(greedy.begin(), greedy.end());
  return greedy;
}

std::vector<std::size_t> approx_min_k_union(
    std::size_t k, std::span<const SwitchBitmap> candidates) {
  std::vector<std::size_t> pool(candidates.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  return approx_min_k_union(k, candidates, pool);
}

}  // namespace srmc
