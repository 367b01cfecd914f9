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

#ifndef SRMC_HEADER_H_
#define SRMC_HEADER_H_

#include <array>
#include <cstdint>
#include <vector>

#include "srmc/port_bitmap.h"

namespace srmc {

// Header sections in packet order.
enum class Section : std::uint8_t {
  kUpstreamLeaf = 0,
  kUpstreamSpine = 1,
  kCore = 2,
  kDownstreamSpine = 3,
  kDownstreamLeaf = 4,
};
inline constexpr std::size_t kNumSections = 5;

const char* section_name(Section s);

enum class RuleKind : std::uint8_t { kUpstream, kCore, kDownstream, kDefault };

// One p-rule. Upstream rules carry the full port bitmap (downstream then
// upstream ports) and a multipath flag; core rules carry the pod bitmap;
// downstream rules carry logical switch ids and a downstream-only bitmap.
struct PRule {
  RuleKind kind = RuleKind::kDownstream;
  bool multipath = false;
  std::vector<std::uint32_t> ids;
  PortBitmap bitmap;

  friend bool operator==(const PRule&, const PRule&) = default;
};

struct PacketHeader {
  // An empty section is absent from the packet.
  std::array<std::vector<PRule>, kNumSections> sections;

  std::vector<PRule>& at(Section s) {
    return sections[static_cast<std::size_t>(s)];
  }
  const std::vector<PRule>& at(Section s) const {
    return sections[static_cast<std::size_t>(s)];
  }
  bool has(Section s) const { return !at(s).empty(); }
  bool empty() const {
    for (const auto& s : sections) {
      if (!s.empty()) return false;
    }
    return true;
  }

  friend bool operator==(const PacketHeader&, const PacketHeader&) = default;
};

}  // namespace srmc

#endif  // SRMC_HEADER_H_
