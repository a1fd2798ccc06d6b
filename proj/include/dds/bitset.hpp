#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dds {

// Fixed-universe bitset. Rule bodies and transactions use it over the item
// universe; rule covers use it over the record universe. All binary
// operations require both operands to share the same universe size.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t universe)
      : size_(universe), words_((universe + 63) / 64, 0) {}

  static Bitset from_indices(std::size_t universe,
                             const std::vector<std::size_t>& indices) {
    Bitset b(universe);
    for (auto i : indices) b.set(i);
    return b;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return count() == 0; }

  void set(std::size_t i) {
    check_index(i);
    words_[i >> 6] |= (std::uint64_t{1} << (i & 63));
  }
  void reset(std::size_t i) {
    check_index(i);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  bool test(std::size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool is_subset_of(const Bitset& other) const {
    check_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }

  Bitset& operator|=(const Bitset& other) {
    check_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
  }
  Bitset& operator&=(const Bitset& other) {
    check_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
  }
  // set difference: this \ other
  Bitset& operator-=(const Bitset& other) {
    check_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
    return *this;
  }

  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

  std::size_t intersection_count(const Bitset& other) const {
    check_universe(other);
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
      c += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
    return c;
  }
  std::size_t union_count(const Bitset& other) const {
    check_universe(other);
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
      c += static_cast<std::size_t>(std::popcount(words_[k] | other.words_[k]));
    return c;
  }

  bool operator==(const Bitset& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }

  // Orders by the sorted sequence of set indices, so {0,3} < {1,2}.
  // An itemset that is a strict prefix of another comes first.
  bool lex_less(const Bitset& other) const {
    check_universe(other);
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t diff = words_[k] ^ other.words_[k];
      if (diff == 0) continue;
      const int bit = std::countr_zero(diff);
      const bool in_this = (words_[k] >> bit) & 1;
      // the set without this index wins only if it has ended here
      const std::vector<std::uint64_t>& tail = in_this ? other.words_ : words_;
      bool tail_nonempty = (tail[k] >> bit >> 1) != 0;
      for (std::size_t k2 = k + 1; !tail_nonempty && k2 < tail.size(); ++k2)
        tail_nonempty = tail[k2] != 0;
      return tail_nonempty == in_this;
    }
    return false;
  }

  std::vector<std::size_t> indices() const {
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

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::size_t hash() const {
    std::size_t h = size_;
    for (auto w : words_) h = h * 0x9e3779b97f4a7c15ULL + std::hash<std::uint64_t>{}(w);
    return h;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("bitset index " + std::to_string(i) +
                                            " out of universe " + std::to_string(size_));
  }
  void check_universe(const Bitset& other) const {
    if (size_ != other.size_)
      throw std::invalid_argument("bitset universe mismatch: " + std::to_string(size_) +
                                  " vs " + std::to_string(other.size_));
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

using ItemSet = Bitset;

}  // namespace dds
