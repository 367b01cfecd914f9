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

#ifndef SRMC_PORT_BITMAP_H_
#define SRMC_PORT_BITMAP_H_

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace srmc {

// Fixed-width bit vector over a switch's ports. Bit 0 is printed first
// (leftmost), so "00010111" has bits 3, 5, 6 and 7 set.
class PortBitmap {
 public:
  static constexpr std::size_t kMaxWidth = 576;
  static constexpr std::size_t kWords = kMaxWidth / 64;

  PortBitmap() = default;
  explicit PortBitmap(std::size_t width);

  // Parses '0'/'1' characters; '-' separators are skipped.
  static PortBitmap FromString(std::string_view bits);

  std::size_t width() const { return width_; }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  std::size_t count() const;
  bool none() const;
  bool any() const { return !none(); }

  PortBitmap& operator|=(const PortBitmap& o);
  PortBitmap& operator&=(const PortBitmap& o);
  // Clears every bit set in o.
  PortBitmap& subtract(const PortBitmap& o);

  bool is_subset_of(const PortBitmap& o) const;
  std::size_t union_count(const PortBitmap& o) const;
  std::size_t hamming(const PortBitmap& o) const;

  // Bits [begin, begin + len) as a new bitmap of width len.
  PortBitmap slice(std::size_t begin, std::size_t len) const;
  // Copies o into bits [begin, begin + o.width()).
  void place(std::size_t begin, const PortBitmap& o);
  // Same bits, different width; bits beyond the new width are dropped.
  PortBitmap resized(std::size_t width) const;

  std::string to_string() const;
  // Inserts '-' before bit `split`, e.g. "00010111-00".
  std::string to_string(std::size_t split) const;

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < num_words(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::uint64_t word(std::size_t w) const { return words_[w]; }
  std::size_t num_words() const { return (width_ + 63) / 64; }
  std::size_t hash() const;

  friend bool operator==(const PortBitmap& a, const PortBitmap& b) {
    return a.width_ == b.width_ && a.words_ == b.words_;
  }
  // Lexicographic on printed form.
  friend bool operator<(const PortBitmap& a, const PortBitmap& b);

 private:
  void check_same_width(const PortBitmap& o) const;

  std::uint16_t width_ = 0;
  std::array<std::uint64_t, kWords> words_{};
};

PortBitmap operator|(PortBitmap a, const PortBitmap& b);

}  // namespace srmc

#endif  // SRMC_PORT_BITMAP_H_
