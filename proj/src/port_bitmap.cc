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

#include "srmc/port_bitmap.h"

#include <algorithm>

#include "srmc/error.h"

namespace srmc {

PortBitmap::PortBitmap(std::size_t width) {
  if (width > kMaxWidth) {
    throw InvalidArgument("bitmap width " + std::to_string(width) +
                          " exceeds " + std::to_string(kMaxWidth));
  }
  width_ = static_cast<std::uint16_t>(width);
}

PortBitmap PortBitmap::FromString(std::string_view bits) {
  std::size_t width = 0;
  for (char c : bits) {
    if (c == '0' || c == '1') {
      ++width;
    } else if (c != '-') {
      throw InvalidArgument("bad bitmap character '" + std::string(1, c) +
                            "'");
    }
  }
  PortBitmap b(width);
  std::size_t i = 0;
  for (char c : bits) {
    if (c == '-') continue;
    if (c == '1') b.set(i);
    ++i;
  }
  return b;
}

std::size_t PortBitmap::count() const {
  std::size_t n = 0;
  for (std::size_t w = 0; w < num_words(); ++w) n += std::popcount(words_[w]);
  return n;
}

bool PortBitmap::none() const {
  for (std::size_t w = 0; w < num_words(); ++w) {
    if (words_[w]) return false;
  }
  return true;
}

void PortBitmap::check_same_width(const PortBitmap& o) const {
  if (width_ != o.width_) {
    throw InvalidArgument("bitmap width mismatch: " + std::to_string(width_) +
                          " vs " + std::to_string(o.width_));
  }
}

PortBitmap& PortBitmap::operator|=(const PortBitmap& o) {
  check_same_width(o);
  for (std::size_t w = 0; w < num_words(); ++w) words_[w] |= o.words_[w];
  return *this;
}

PortBitmap& PortBitmap::operator&=(const PortBitmap& o) {
  check_same_width(o);
  for (std::size_t w = 0; w < num_words(); ++w) words_[w] &= o.words_[w];
  return *this;
}

PortBitmap& PortBitmap::subtract(const PortBitmap& o) {
  check_same_width(o);
  for (std::size_t w = 0; w < num_words(); ++w) words_[w] &= ~o.words_[w];
  return *this;
}

bool PortBitmap::is_subset_of(const PortBitmap& o) const {
  check_same_width(o);
  for (std::size_t w = 0; w < num_words(); ++w) {
    if (words_[w] & ~o.words_[w]) return false;
  }
  return true;
}

std::size_t PortBitmap::union_count(const PortBitmap& o) const {
  check_same_width(o);
  std::size_t n = 0;
  for (std::size_t w = 0; w < num_words(); ++w) {
    n += std::popcount(words_[w] | o.words_[w]);
  }
  return n;
}

std::size_t PortBitmap::hamming(const PortBitmap& o) const {
  check_same_width(o);
  std::size_t n = 0;
  for (std::size_t w = 0; w < num_words(); ++w) {
    n += std::popcount(words_[w] ^ o.words_[w]);
  }
  return n;
}

PortBitmap PortBitmap::slice(std::size_t begin, std::size_t len) const {
  if (begin + len > width_) {
    throw InvalidArgument("slice out of range");
  }
  PortBitmap out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (test(begin + i)) out.set(i);
  }
  return out;
}

void PortBitmap::place(std::size_t begin, const PortBitmap& o) {
  if (begin + o.width() > width_) {
    throw InvalidArgument("place out of range");
  }
  for (std::size_t i = 0; i < o.width(); ++i) assign(begin + i, o.test(i));
}

PortBitmap PortBitmap::resized(std::size_t width) const {
  PortBitmap out(width);
  std::size_t n = std::min<std::size_t>(width, width_);
  for (std::size_t i = 0; i < n; ++i) {
    if (test(i)) out.set(i);
  }
  return out;
}

std::string PortBitmap::to_string() const {
  std::string s(width_, '0');
  for_each_set([&](std::size_t i) { s[i] = '1'; });
  return s;
}

std::string PortBitmap::to_string(std::size_t split) const {
  std::string s = to_string();
  if (split <= s.size()) s.insert(split, 1, '-');
  return s;
}

std::size_t PortBitmap::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ width_;
  for (std::size_t w = 0; w < num_words(); ++w) {
    h ^= words_[w] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool operator<(const PortBitmap& a, const PortBitmap& b) {
  if (a.width_ != b.width_) return a.width_ < b.width_;
  for (std::size_t w = 0; w < a.num_words(); ++w) {
    const std::uint64_t x = a.words_[w] ^ b.words_[w];
    if (x) return (b.words_[w] >> std::countr_zero(x)) & 1u;
  }
  return false;
}

PortBitmap operator|(PortBitmap a, const PortBitmap& b) {
  a |= b;
  return a;
}

}  // namespace srmc
