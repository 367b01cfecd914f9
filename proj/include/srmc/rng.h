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

#ifndef SRMC_RNG_H_
#define SRMC_RNG_H_

#include <cstdint>
#include <vector>

namespace srmc {

std::uint64_t splitmix64(std::uint64_t& state);

// Mixes values into a seed. Used to derive independent per-group and
// per-tenant streams so results do not depend on evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                       std::uint64_t b = 0);

// xoshiro256**. The standard library engines are portable but their
// distributions are not, so bounded integers and doubles are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform on [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }
  // Uniform on [0, 1) with 53 bits.
  double uniform();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace srmc

#endif  // SRMC_RNG_H_
