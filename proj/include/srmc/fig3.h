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

#ifndef SRMC_FIG3_H_
#define SRMC_FIG3_H_

#include <vector>

#include "srmc/cluster.h"
#include "srmc/multicast_tree.h"
#include "srmc/topology.h"

namespace srmc {

// The running example: four pods of two spines and two leaves, eight hosts
// per leaf, four cores. One sender under L1 and receivers under L0, L5, L6
// and L7 (pods P0, P2 and P3).
struct Fig3Example {
  Topology topo{TopologySpec::Fig3()};
  HostId sender = 8;
  std::vector<HostMember> members;
  MulticastTree tree;

  Fig3Example();

  // One rule per logical switch, no sharing.
  static EncodingConfig unshared_config();
  // Two leaf p-rules and one spine p-rule, up to two switches per rule.
  static EncodingConfig shared_config(std::uint32_t r,
                                      std::uint32_t f_max = kUnbounded);
};

}  // namespace srmc

#endif  // SRMC_FIG3_H_
