// Copyright 2026 The cubefield Authors
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

#ifndef CUBEFIELD_BITS_HPP_
#define CUBEFIELD_BITS_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cubefield {

// Fixed-length bit vector. Bit i is character i of the string form.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  static std::optional<Bits> parse(std::string_view s) {
    Bits b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        b.set(i);
      } else if (s[i] != '0') {
        return std::nullopt;
      }
    }
    return b;
  }

  static Bits from_string(std::string_view s) {
    auto b = parse(s);
    if (!b) throw std::invalid_argument("bad bitstring: " + std::string(s));
    return *b;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  Bits flipped(std::size_t i) const {
    Bits r = *this;
    r.flip(i);
    return r;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (auto w : words_) {
      if (w) return false;
    }
    return true;
  }

  // Indices of set bits, ascending.
  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  Bits& operator^=(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  Bits operator~() const {
    Bits r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }
  friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }

  friend std::size_t hamming(const Bits& a, const Bits& b) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.words_.size(); ++k) {
      c += static_cast<std::size_t>(std::popcount(a.words_[k] ^ b.words_[k]));
    }
    return c;
  }

  static Bits majority(const Bits& a, const Bits& b, const Bits& c) {
    Bits r(a.size_);
    for (std::size_t k = 0; k < r.words_.size(); ++k) {
      r.words_[k] = (a.words_[k] & b.words_[k]) | (a.words_[k] & c.words_[k]) |
                    (b.words_[k] & c.words_[k]);
    }
    return r;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if (test(i)) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const Bits& a, const Bits& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  // Lexicographic order on the string form.
  friend std::strong_ordering operator<=>(const Bits& a, const Bits& b) {
    const std::size_t n = std::min(a.words_.size(), b.words_.size());
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t x = a.words_[k] ^ b.words_[k];
      if (x) {
        const int i = std::countr_zero(x);
        return ((a.words_[k] >> i) & 1u) ? std::strong_ordering::greater
                                          : std::strong_ordering::less;
      }
    }
    return a.size_ <=> b.size_;
  }

  std::size_t hash() const {
    std::size_t h = size_ * 0x9e3779b97f4a7c15ull;
    for (auto w : words_) {
      h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) +
           (h >> 2);
    }
    return h;
  }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace cubefield

#endif  // CUBEFIELD_BITS_HPP_
