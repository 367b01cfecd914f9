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

#ifndef SRMC_WIRE_H_
#define SRMC_WIRE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srmc/cluster.h"
#include "srmc/header.h"
#include "srmc/topology.h"

namespace srmc {

// Field widths of the on-wire format.
//
//   preamble   16 bits: 5-bit section presence mask (upstream leaf first,
//              MSB) + 11-bit total header length in bytes
//   upstream   [next:1][type=0:1][multipath:1][bitmap: down+up ports]
//   core       [next:1][type=1:1][bitmap: pods]
//   downstream [next:1][type=1:1][count:c][ids: count x id bits][bitmap]
//              count 0 marks the default p-rule, which must come last
//
// Every section is padded to a byte boundary. Bits are written MSB-first and
// bitmap bit 0 goes first.
struct WireLayout {
  std::uint32_t leaf_down = 0;
  std::uint32_t leaf_up = 0;
  std::uint32_t spine_down = 0;
  std::uint32_t spine_up = 0;
  std::uint32_t core_down = 0;
  std::uint32_t leaf_id_bits = 0;
  std::uint32_t spine_id_bits = 0;
  std::uint32_t leaf_count_bits = 0;
  std::uint32_t spine_count_bits = 0;

  static WireLayout For(const LogicalTopology& logical,
                        std::uint32_t leaf_k_max, std::uint32_t spine_k_max);
  static WireLayout For(const Topology& topo, const EncodingConfig& cfg) {
    return For(topo.logical(), cfg.leaf.k_max, cfg.spine.k_max);
  }

  std::uint32_t bitmap_width(Section s) const;
  std::uint32_t id_bits(Section s) const;
  std::uint32_t count_bits(Section s) const;
  std::uint32_t max_ids(Section s) const {
    return (std::uint32_t{1} << count_bits(s)) - 1;
  }
};

inline constexpr std::size_t kPreambleBytes = 2;
inline constexpr std::size_t kMaxHeaderBytes = 2047;

std::vector<std::uint8_t> encode_header(const PacketHeader& h,
                                        const WireLayout& layout);

PacketHeader decode_header(std::span<const std::uint8_t> bytes,
                         const WireLayout& layout);

struct MatchResult {
  enum class Kind : std::uint8_t { kMatched, kDefault, kNoRule };
  Kind kind = Kind::kNoRule;
  PortBitmap bitmap;
  bool multipath = false;
  // Header bits read to reach the decision.
  std::size_t bits_scanned = 0;
};

// Reads the rule for `switch_id` from `section`, which must be the first
// section present. Upstream and core rules match by position; downstream
// rules match on the first id list containing switch_id, then the default.
// An empty header or an absent section yields kNoRule.
MatchResult parse_for_switch(std::span<const std::uint8_t> bytes,
                             const WireLayout& layout, Section section,
                             std::uint32_t switch_id);

// Removes every present section up to and including `through`. Returns an
// empty buffer once no section is left.
std::vector<std::uint8_t> pop_layers(std::span<const std::uint8_t> bytes,
                                     const WireLayout& layout,
                                     Section through);

// Presence mask of an encoded header, bit i set for Section i.
std::uint32_t present_sections(std::span<const std::uint8_t> bytes);

// "preamble <hex>" followed by one "<section> <hex>" line per section.
std::string hex_dump(std::span<const std::uint8_t> bytes,
                     const WireLayout& layout);

// Encoded size of the largest header with the given rule budgets.
std::size_t worst_case_header_bytes(const WireLayout& layout,
                                    std::uint32_t spine_rules,
                                    std::uint32_t spine_k,
                                    std::uint32_t leaf_rules,
                                    std::uint32_t leaf_k);

}  // namespace srmc

#endif  // SRMC_WIRE_H_
