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

#ifndef SRMC_MIN_K_UNION_H_
#define SRMC_MIN_K_UNION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "srmc/multicast_tree.h"

namespace srmc {

// Picks k entries whose union has few set bits. Greedy: start from the
// entry with the fewest bits, then repeatedly add the entry that grows the
// union least (ties go to the lower switch id). When some bitmap occurs at
// least k times, k copies of it are also a candidate and win if their union
// is smaller. Returns indices into `candidates`, ascending.
std::vector<std::size_t> approx_min_k_union(
    std::size_t k, std::span<const SwitchBitmap> candidates);

// Same, over a subset of `all` given by `pool` (indices into `all`).
// Returns indices into `all`, ascending.
std::vector<std::size_t> approx_min_k_union(
    std::size_t k, std::span<const SwitchBitmap> all,
    std::span<const std::size_t> pool);

}  // namespace srmc

#endif  // SRMC_MIN_K_UNION_H_
