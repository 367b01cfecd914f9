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

#ifndef SRMC_ORACLE_H_
#define SRMC_ORACLE_H_

#include <vector>

#include "srmc/encode.h"
#include "srmc/multicast_tree.h"
#include "srmc/topology.h"

namespace srmc {

// Hosts a packet from `source` reaches, computed from the layer encodings
// as plain sets without building or parsing a header. Ascending.
std::vector<HostId> reference_delivery(const Topology& topo,
                                       const MulticastTree& tree,
                                       const GroupEncoding& enc,
                                       HostId source);

// Receivers other than the source, ascending.
std::vector<HostId> expected_receivers(const MulticastTree& tree,
                                       HostId source);

}  // namespace srmc

#endif  // SRMC_ORACLE_H_
