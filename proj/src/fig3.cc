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

#include "srmc/fig3.h"

namespace srmc {

Fig3Example::Fig3Example() {
  members.push_back({sender, Role::kSender});
  // L0 00010111, L5 11100001, L6 00011111, L7 11110001.
  for (HostId h : {3u, 5u, 6u, 7u, 40u, 41u, 42u, 47u, 51u, 52u, 53u, 54u, 55u,
                   56u, 57u, 58u, 59u, 63u}) {
    members.push_back({h, Role::kReceiver});
  }
  tree = compute_tree(topo, 0, members);
}

EncodingConfig Fig3Example::unshared_config() {
  EncodingConfig cfg;
  cfg.r = 0;
  cfg.leaf = {64, 1};
  cfg.spine = {64, 1};
  cfg.f_max = kUnbounded;
  cfg.header_budget_bytes = 64;
  return cfg;
}

EncodingConfig Fig3Example::shared_config(std::uint32_t r,
                                          std::uint32_t f_max) {
  EncodingConfig cfg;
  cfg.r = r;
  cfg.leaf = {2, 2};
  cfg.spine = {1, 2};
  cfg.f_max = f_max;
  cfg.header_budget_bytes = 64;
  return cfg;
}

}  // namespace srmc
