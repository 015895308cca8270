#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace sunflower {

/// Largest supported ground set.
inline constexpr int kMaxElements = 256;

/**
 * Subset of a ground set {0, ..., kMaxElements-1} stored as fixed-width
 * bitmask blocks.
 *
 * Indices are 0-based. The "label" accessors convert to and from the 1-based
 * element names used in files and on the command line.
 *
 * The ordering is lexicographic on the sorted element list, so {0} < {0,1} <
 * {1}. Every container in the library that needs a deterministic order uses
 * it.
 */
class ElementSet {
 public:
  static constexpr std::size_t kWords = kMaxElements / 64;
  using Word = std::uint64_t;

  constexpr ElementSet() = default;

  static ElementSet from_indices(std::initializer_list<int> indices) {
    ElementSet s;
    for (int i : indices) s.insert(i);
    return s;
  }

  template <typename Range>
  static ElementSet from_index_range(const Range& indices) {
    ElementSet s;
    for (int i : indices) s.insert(static_cast<int>(i));
    return s;
  }

  /// Builds a set from 1-based labels.
  static ElementSet from_labels(std::initializer_list<int> labels) {
    ElementSet s;
    for (int l : labels) s.insert(l - 1);
    return s;
  }

  template <typename Range>
  static ElementSet from_label_range(const Range& labels) {
    ElementSet s;
    for (auto l : labels) s.insert(static_cast<int>(l) - 1);
    return s;
  }

  /// {0, ..., count-1}
  static ElementSet prefix(int count) {
    ElementSet s;
    for (int i = 0; i < count; ++i) s.insert(i);
    return s;
  }

  constexpr bool contains(int index) const noexcept {
    return (words_[static_cast<std::size_t>(index) >> 6] >> (index & 63)) & 1U;
  }

  void insert(int index) {
    check(index);
    words_[static_cast<std::size_t>(index) >> 6] |= Word{1} << (index & 63);
  }

  void erase(int index) {
    check(index);
    words_[static_cast<std::size_t>(index) >> 6] &= ~(Word{1} << (index & 63));
  }

  constexpr int size() const noexcept {
    int total = 0;
    for (Word w : words_) total += std::popcount(w);
    return total;
  }

  constexpr bool empty() const noexcept {
    for (Word w : words_)
      if (w != 0) return false;
    return true;
  }

  /// Largest index + 1, or 0 for the empty set.
  constexpr int span() const noexcept {
    for (std::size_t w = kWords; w-- > 0;)
      if (words_[w] != 0) return static_cast<int>(w * 64 + 64 - std::countl_zero(words_[w]));
    return 0;
  }

  constexpr bool is_subset_of(const ElementSet& other) const noexcept {
    for (std::size_t w = 0; w < kWords; ++w)
      if ((words_[w] & ~other.words_[w]) != 0) return false;
    return true;
  }

  constexpr bool intersects(const ElementSet& other) const noexcept {
    for (std::size_t w = 0; w < kWords; ++w)
      if ((words_[w] & other.words_[w]) != 0) return true;
    return false;
  }

  constexpr bool disjoint(const ElementSet& other) const noexcept { return !intersects(other); }

  constexpr int intersection_size(const ElementSet& other) const noexcept {
    int total = 0;
    for (std::size_t w = 0; w < kWords; ++w) total += std::popcount(words_[w] & other.words_[w]);
    return total;
  }

  ElementSet& operator|=(const ElementSet& o) noexcept {
    for (std::size_t w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  ElementSet& operator&=(const ElementSet& o) noexcept {
    for (std::size_t w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  ElementSet& operator-=(const ElementSet& o) noexcept {
    for (std::size_t w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  friend ElementSet operator|(ElementSet a, const ElementSet& b) noexcept { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) noexcept { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) noexcept { return a -= b; }

  friend constexpr bool operator==(const ElementSet&, const ElementSet&) = default;

  /// Lexicographic order of the sorted element lists.
  friend std::strong_ordering operator<=>(const ElementSet& a, const ElementSet& b) noexcept {
    for (std::size_t w = 0; w < kWords; ++w) {
      Word diff = a.words_[w] ^ b.words_[w];
      if (diff == 0) continue;
      int bit = std::countr_zero(diff);
      bool in_a = (a.words_[w] >> bit) & 1U;
      // The set owning the first differing element is smaller, unless the
      // other set has nothing beyond it (then the other is a proper prefix).
      const ElementSet& other = in_a ? b : a;
      bool other_continues = other.has_element_above(w, bit);
      if (in_a) return other_continues ? std::strong_ordering::less : std::strong_ordering::greater;
      return other_continues ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < kWords; ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        int bit = std::countr_zero(bits);
        fn(static_cast<int>(w * 64) + bit);
        bits &= bits - 1;
      }
    }
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  std::vector<int> labels() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int i) { out.push_back(i + 1); });
    return out;
  }

  /// Smallest index, or -1 when empty.
  int first() const noexcept {
    for (std::size_t w = 0; w < kWords; ++w)
      if (words_[w] != 0) return static_cast<int>(w * 64) + std::countr_zero(words_[w]);
    return -1;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (Word w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  std::string to_string() const {
    std::string s = "{";
    bool first_item = true;
    for_each([&](int i) {
      if (!first_item) s += ",";
      s += std::to_string(i + 1);
      first_item = false;
    });
    return s + "}";
  }

  friend std::ostream& operator<<(std::ostream& os, const ElementSet& s) { return os << s.to_string(); }

 private:
  static void check(int index) {
    if (index < 0 || index >= kMaxElements)
      throw std::out_of_range("element index " + std::to_string(index) + " outside supported range");
  }

  constexpr bool has_element_above(std::size_t word, int bit) const noexcept {
    Word above = bit == 63 ? 0 : (words_[word] >> (bit + 1));
    if (above != 0) return true;
    for (std::size_t w = word + 1; w < kWords; ++w)
      if (words_[w] != 0) return true;
    return false;
  }

  std::array<Word, kWords> words_{};
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

/// Calls fn(subset) for every size-r subset of pool, in lexicographic order.
/// Returning false from fn stops the enumeration; the return value reports
/// whether it ran to completion.
template <typename Fn>
bool for_each_combination(const ElementSet& pool, int r, Fn&& fn) {
  std::vector<int> items = pool.indices();
  const int n = static_cast<int>(items.size());
  if (r < 0 || r > n) return true;
  std::vector<int> pick(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    ElementSet s;
    for (int p : pick) s.insert(items[static_cast<std::size_t>(p)]);
    if constexpr (std::is_same_v<std::invoke_result_t<Fn, const ElementSet&>, bool>) {
      if (!fn(static_cast<const ElementSet&>(s))) return false;
    } else {
      fn(static_cast<const ElementSet&>(s));
    }
    int i = r - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return true;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Calls fn(subset) for every nonempty subset of s (2^|s| - 1 calls).
template <typename Fn>
void for_each_nonempty_subset(const ElementSet& s, Fn&& fn) {
  std::vector<int> items = s.indices();
  const std::size_t n = items.size();
  if (n >= 63) throw std::length_error("subset enumeration of a set with 63+ elements");
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    ElementSet sub;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) sub.insert(items[i]);
    fn(static_cast<const ElementSet&>(sub));
  }
}

}  // namespace sunflower

template <>
struct std::hash<sunflower::ElementSet> {
  std::size_t operator()(const sunflower::ElementSet& s) const noexcept { return s.hash(); }
};
