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

#include "srmc/wire.h"

#include <algorithm>
#include <cstdio>

#include "srmc/error.h"

namespace srmc {

const char* section_name(Section s) {
  switch (s) {
    case Section::kUpstreamLeaf:
      return "upstream-leaf";
    case Section::kUpstreamSpine:
      return "upstream-spine";
    case Section::kCore:
      return "core";
    case Section::kDownstreamSpine:
      return "downstream-spine";
    case Section::kDownstreamLeaf:
      return "downstream-leaf";
  }
  return "?";
}

namespace {

bool is_upstream(Section s) {
  return s == Section::kUpstreamLeaf || s == Section::kUpstreamSpine;
}
std::uint32_t mask_bit(std::size_t i) { return 1u << i; }

class BitWriter {
 public:
  void put_bit(bool b) {
    if (pos_ % 8 == 0) buf_.push_back(0);
    if (b) buf_.back() |= static_cast<std::uint8_t>(0x80u >> (pos_ % 8));
    ++pos_;
  }
  void put(std::uint64_t v, std::uint32_t n) {
    for (std::uint32_t i = n; i-- > 0;) put_bit((v >> i) & 1u);
  }
  void put_bitmap(const PortBitmap& b) {
    for (std::size_t i = 0; i < b.width(); ++i) put_bit(b.test(i));
  }
  void align() { pos_ = buf_.size() * 8; }
  std::vector<std::uint8_t>& bytes() { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::size_t begin,
            std::size_t end)
      : bytes_(bytes), pos_(begin * 8), end_(end * 8), start_(begin * 8) {}

  bool bit() {
    if (pos_ >= end_) throw ParseError("truncated header", pos_ / 8);
    const bool b = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }
  std::uint64_t get(std::uint32_t n) {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < n; ++i) v = (v << 1) | (bit() ? 1u : 0u);
    return v;
  }
  PortBitmap bitmap(std::uint32_t width) {
    if (pos_ + width > end_) throw ParseError("truncated bitmap", pos_ / 8);
    PortBitmap b(width);
    for (std::uint32_t i = 0; i < width; ++i) {
      if (bit()) b.set(i);
    }
    return b;
  }
  void skip(std::size_t n) {
    if (pos_ + n > end_) throw ParseError("truncated header", pos_ / 8);
    pos_ += n;
  }
  void align() { pos_ = (pos_ + 7) / 8 * 8; }
  std::size_t byte_pos() const { return pos_ / 8; }
  std::size_t bits_read() const { return pos_ - start_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
  std::size_t end_;
  std::size_t start_;
};

struct Preamble {
  std::uint32_t mask = 0;
  std::size_t length = 0;
};

Preamble read_preamble(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreambleBytes) {
    throw ParseError("header shorter than preamble", bytes.size());
  }
  Preamble p;
  p.mask = bytes[0] >> 3;
  p.length = (static_cast<std::size_t>(bytes[0] & 7u) << 8) | bytes[1];
  if (p.mask == 0) throw ParseError("empty section mask", 0);
  if (p.length < kPreambleBytes || p.length > bytes.size()) {
    throw ParseError("bad header length " + std::to_string(p.length), 0);
  }
  return p;
}

void write_preamble(std::vector<std::uint8_t>& buf, std::uint32_t mask) {
  const std::size_t len = buf.size();
  buf[0] = static_cast<std::uint8_t>((mask << 3) | ((len >> 8) & 7u));
  buf[1] = static_cast<std::uint8_t>(len & 0xffu);
}

// Wire preamble bit for section i: the mask's MSB is the upstream leaf.
std::uint32_t wire_mask(std::uint32_t presence) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < kNumSections; ++i) {
    if (presence & mask_bit(i)) m |= 1u << (kNumSections - 1 - i);
  }
  return m;
}
std::uint32_t presence_from_wire(std::uint32_t wire) {
  return wire_mask(wire);  // the mapping is its own inverse
}

void encode_section(BitWriter& w, const WireLayout& layout, Section s,
                    const std::vector<PRule>& rules) {
  const std::uint32_t width = layout.bitmap_width(s);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const PRule& r = rules[i];
    const bool last = i + 1 == rules.size();
    if (r.bitmap.width() != width) {
      throw InvalidArgument(std::string(section_name(s)) +
                            ": bitmap width " +
                            std::to_string(r.bitmap.width()) + ", expected " +
                            std::to_string(width));
    }
    w.put_bit(!last);
    if (is_upstream(s)) {
      if (r.kind != RuleKind::kUpstream || !r.ids.empty()) {
        throw InvalidArgument("upstream section holds a non-upstream rule");
      }
      w.put_bit(false);
      w.put_bit(r.multipath);
    } else if (s == Section::kCore) {
      if (r.kind != RuleKind::kCore || !r.ids.empty() || r.multipath) {
        throw InvalidArgument("core section holds a non-core rule");
      }
      w.put_bit(true);
    } else {
      if (r.multipath) throw InvalidArgument("multipath on downstream rule");
      if (r.kind == RuleKind::kDefault) {
        if (!last) throw InvalidArgument("default p-rule must be last");
        if (!r.ids.empty()) throw InvalidArgument("default p-rule has ids");
      } else if (r.kind != RuleKind::kDownstream || r.ids.empty()) {
        throw InvalidArgument("downstream rule without switch ids");
      }
      if (r.ids.size() > layout.max_ids(s)) {
        throw InvalidArgument("too many ids in one p-rule: " +
                              std::to_string(r.ids.size()));
      }
      const std::uint32_t idw = layout.id_bits(s);
      w.put_bit(true);
      w.put(r.ids.size(), layout.count_bits(s));
      for (std::uint32_t id : r.ids) {
        if (idw < 32 && id >= (std::uint32_t{1} << idw)) {
          throw InvalidArgument("switch id " + std::to_string(id) +
                                " does not fit in " + std::to_string(idw) +
                                " bits");
        }
        w.put(id, idw);
      }
    }
    w.put_bitmap(r.bitmap);
  }
  w.align();
}

// Reads one section. Rules are appended to `out` when it is non-null.
void decode_section(BitReader& rd, const WireLayout& layout, Section s,
                    std::vector<PRule>* out) {
  const std::uint32_t width = layout.bitmap_width(s);
  while (true) {
    const std::size_t at = rd.byte_pos();
    const bool next = rd.bit();
    const bool type = rd.bit();
    PRule r;
    if (is_upstream(s)) {
      if (type) throw ParseError("downstream rule in upstream section", at);
      r.kind = RuleKind::kUpstream;
      r.multipath = rd.bit();
    } else if (s == Section::kCore) {
      if (!type) throw ParseError("upstream rule in core section", at);
      r.kind = RuleKind::kCore;
    } else {
      if (!type) throw ParseError("upstream rule in downstream section", at);
      const auto count =
          static_cast<std::uint32_t>(rd.get(layout.count_bits(s)));
      const std::uint32_t idw = layout.id_bits(s);
      if (count == 0) {
        if (next) throw ParseError("default p-rule is not last", at);
        r.kind = RuleKind::kDefault;
      } else {
        r.kind = RuleKind::kDownstream;
        if (out) {
          r.ids.reserve(count);
          for (std::uint32_t i = 0; i < count; ++i) {
            r.ids.push_back(static_cast<std::uint32_t>(rd.get(idw)));
          }
        } else {
          rd.skip(std::size_t{count} * idw);
        }
      }
    }
    if (out) {
      r.bitmap = rd.bitmap(width);
      out->push_back(std::move(r));
    } else {
      rd.skip(width);
    }
    if (!next) break;
  }
  rd.align();
}

}  // namespace

WireLayout WireLayout::For(const LogicalTopology& logical,
                           std::uint32_t leaf_k_max,
                           std::uint32_t spine_k_max) {
  WireLayout l;
  l.leaf_down = logical.leaf_down;
  l.leaf_up = logical.leaf_up;
  l.spine_down = logical.spine_down;
  l.spine_up = logical.spine_up;
  l.core_down = logical.core_down;
  l.leaf_id_bits = logical.leaf_id_bits;
  l.spine_id_bits = logical.spine_id_bits;
  l.leaf_count_bits = id_bits_for(std::uint64_t{leaf_k_max} + 1);
  l.spine_count_bits = id_bits_for(std::uint64_t{spine_k_max} + 1);
  return l;
}

std::uint32_t WireLayout::bitmap_width(Section s) const {
  switch (s) {
    case Section::kUpstreamLeaf:
      return leaf_down + leaf_up;
    case Section::kUpstreamSpine:
      return spine_down + spine_up;
    case Section::kCore:
      return core_down;
    case Section::kDownstreamSpine:
      return spine_down;
    case Section::kDownstreamLeaf:
      return leaf_down;
  }
  return 0;
}

std::uint32_t WireLayout::id_bits(Section s) const {
  if (s == Section::kDownstreamLeaf) return leaf_id_bits;
  if (s == Section::kDownstreamSpine) return spine_id_bits;
  return 0;
}

std::uint32_t WireLayout::count_bits(Section s) const {
  if (s == Section::kDownstreamLeaf) return leaf_count_bits;
  if (s == Section::kDownstreamSpine) return spine_count_bits;
  return 0;
}

std::vector<std::uint8_t> encode_header(const PacketHeader& h,
                                        const WireLayout& layout) {
  if (h.empty()) return {};
  BitWriter w;
  w.put(0, 16);
  std::uint32_t presence = 0;
  for (std::size_t i = 0; i < kNumSections; ++i) {
    const auto s = static_cast<Section>(i);
    if (!h.has(s)) continue;
    presence |= mask_bit(i);
    encode_section(w, layout, s, h.at(s));
  }
  auto& buf = w.bytes();
  if (buf.size() > kMaxHeaderBytes) {
    throw InvalidArgument("header of " + std::to_string(buf.size()) +
                          " bytes exceeds the length field");
  }
  write_preamble(buf, wire_mask(presence));
  return std::move(buf);
}

std::uint32_t present_sections(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return 0;
  return presence_from_wire(read_preamble(bytes).mask);
}

PacketHeader decode_header(std::span<const std::uint8_t> bytes,
                         const WireLayout& layout) {
  PacketHeader h;
  if (bytes.empty()) return h;
  const Preamble p = read_preamble(bytes);
  const std::uint32_t presence = presence_from_wire(p.mask);
  BitReader rd(bytes, kPreambleBytes, p.length);
  for (std::size_t i = 0; i < kNumSections; ++i) {
    if (!(presence & mask_bit(i))) continue;
    decode_section(rd, layout, static_cast<Section>(i),
                   &h.at(static_cast<Section>(i)));
  }
  if (rd.byte_pos() != p.length) {
    throw ParseError("trailing bytes after last section", rd.byte_pos());
  }
  return h;
}

MatchResult parse_for_switch(std::span<const std::uint8_t> bytes,
                             const WireLayout& layout, Section section,
                             std::uint32_t switch_id) {
  MatchResult m;
  if (bytes.empty()) return m;
  const Preamble p = read_preamble(bytes);
  const std::uint32_t presence = presence_from_wire(p.mask);
  const auto idx = static_cast<std::size_t>(section);
  m.bits_scanned = kPreambleBytes * 8;
  if (!(presence & mask_bit(idx))) return m;
  if (presence & (mask_bit(idx) - 1)) {
    throw ParseError(std::string(section_name(section)) +
                         " is not the first section",
                     0);
  }
  BitReader rd(bytes, kPreambleBytes, p.length);
  const std::uint32_t width = layout.bitmap_width(section);
  auto finish = [&] { m.bits_scanned += rd.bits_read(); };
  if (is_upstream(section) || section == Section::kCore) {
    const std::size_t at = rd.byte_pos();
    rd.bit();  // next
    const bool type = rd.bit();
    if (type != (section == Section::kCore)) {
      throw ParseError("rule type does not match section", at);
    }
    if (is_upstream(section)) m.multipath = rd.bit();
    m.bitmap = rd.bitmap(width);
    m.kind = MatchResult::Kind::kMatched;
    finish();
    return m;
  }
  const std::uint32_t idw = layout.id_bits(section);
  const std::uint32_t cw = layout.count_bits(section);
  while (true) {
    const std::size_t at = rd.byte_pos();
    const bool next = rd.bit();
    if (!rd.bit()) throw ParseError("upstream rule in downstream section", at);
    const auto count = static_cast<std::uint32_t>(rd.get(cw));
    if (count == 0) {
      if (next) throw ParseError("default p-rule is not last", at);
      m.bitmap = rd.bitmap(width);
      m.kind = MatchResult::Kind::kDefault;
      finish();
      return m;
    }
    bool hit = false;
    for (std::uint32_t i = 0; i < count; ++i) {
      if (rd.get(idw) == switch_id) {
        hit = true;
        rd.skip(std::size_t{count - i - 1} * idw);
        break;
      }
    }
    if (hit) {
      m.bitmap = rd.bitmap(width);
      m.kind = MatchResult::Kind::kMatched;
      finish();
      return m;
    }
    rd.skip(width);
    if (!next) break;
  }
  finish();
  return m;
}

std::vector<std::uint8_t> pop_layers(std::span<const std::uint8_t> bytes,
                                     const WireLayout& layout,
                                     Section through) {
  if (bytes.empty()) throw InvalidArgument("pop on a stripped header");
  const Preamble p = read_preamble(bytes);
  const std::uint32_t presence = presence_from_wire(p.mask);
  const auto limit = static_cast<std::size_t>(through);
  if (!(presence & ((mask_bit(limit) << 1) - 1))) {
    throw InvalidArgument(std::string("no section to pop through ") +
                          section_name(through));
  }
  BitReader rd(bytes, kPreambleBytes, p.length);
  std::size_t keep_from = kPreambleBytes;
  std::uint32_t kept = 0;
  for (std::size_t i = 0; i < kNumSections; ++i) {
    if (!(presence & mask_bit(i))) continue;
    if (i <= limit) {
      decode_section(rd, layout, static_cast<Section>(i), nullptr);
      keep_from = rd.byte_pos();
    } else {
      kept |= mask_bit(i);
    }
  }
  if (kept == 0) return {};
  std::vector<std::uint8_t> out;
  out.reserve(kPreambleBytes + p.length - keep_from);
  out.resize(kPreambleBytes);
  out.insert(out.end(), bytes.begin() + static_cast<std::ptrdiff_t>(keep_from),
             bytes.begin() + static_cast<std::ptrdiff_t>(p.length));
  write_preamble(out, wire_mask(kept));
  return out;
}

std::string hex_dump(std::span<const std::uint8_t> bytes,
                     const WireLayout& layout) {
  if (bytes.empty()) return "";
  const Preamble p = read_preamble(bytes);
  const std::uint32_t presence = presence_from_wire(p.mask);
  auto hex = [&](std::size_t from, std::size_t to) {
    std::string s;
    char buf[3];
    for (std::size_t i = from; i < to; ++i) {
      std::snprintf(buf, sizeof(buf), "%02x", bytes[i]);
      s += buf;
    }
    return s;
  };
  std::string out = "preamble " + hex(0, kPreambleBytes) + "\n";
  BitReader rd(bytes, kPreambleBytes, p.length);
  for (std::size_t i = 0; i < kNumSections; ++i) {
    if (!(presence & mask_bit(i))) continue;
    const std::size_t from = rd.byte_pos();
    decode_section(rd, layout, static_cast<Section>(i), nullptr);
    out += std::string(section_name(static_cast<Section>(i))) + " " +
           hex(from, rd.byte_pos()) + "\n";
  }
  return out;
}

std::size_t worst_case_header_bytes(const WireLayout& layout,
                                    std::uint32_t spine_rules,
                                    std::uint32_t spine_k,
                                    std::uint32_t leaf_rules,
                                    std::uint32_t leaf_k) {
  auto bytes = [](std::size_t bits) { return (bits + 7) / 8; };
  std::size_t total = kPreambleBytes;
  total += bytes(3 + layout.bitmap_width(Section::kUpstreamLeaf));
  total += bytes(3 + layout.bitmap_width(Section::kUpstreamSpine));
  total += bytes(2 + layout.bitmap_width(Section::kCore));
  auto downstream = [&](Section s, std::uint32_t rules, std::uint32_t k) {
    const std::size_t head = 2 + layout.count_bits(s);
    const std::size_t w = layout.bitmap_width(s);
    return bytes(rules * (head + std::size_t{k} * layout.id_bits(s) + w) +
                 head + w);
  };
  total += downstream(Section::kDownstreamSpine, spine_rules, spine_k);
  total += downstream(Section::kDownstreamLeaf, leaf_rules, leaf_k);
  return total;
}

}  // namespace srmc
