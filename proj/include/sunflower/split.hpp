#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sunflower/element_set.hpp"
#include "sunflower/family.hpp"
#include "sunflower/numeric.hpp"
#include "sunflower/random.hpp"

namespace sunflower {

/// Ordered partition of {0..n-1} into equal strips.
class Split {
 public:
  Split(int n, std::vector<ElementSet> strips) : n_(n), strips_(std::move(strips)), strip_of_(static_cast<std::size_t>(n), -1) {
    if (n_ < 1 || n_ > kMaxElements) throw std::invalid_argument("split ground size out of range");
    if (strips_.empty()) throw std::invalid_argument("split needs at least one strip");
    const int m = static_cast<int>(strips_.size());
    if (n_ % m != 0)
      throw std::invalid_argument("strip count " + std::to_string(m) + " does not divide n=" + std::to_string(n_));
    const int width = n_ / m;
    for (int j = 0; j < m; ++j) {
      const ElementSet& strip = strips_[static_cast<std::size_t>(j)];
      if (strip.size() != width)
        throw std::invalid_argument("strip " + std::to_string(j + 1) + " has " + std::to_string(strip.size()) +
                                    " elements, expected " + std::to_string(width));
      bool ok = true;
      strip.for_each([&](int e) {
        if (e >= n_ || strip_of_[static_cast<std::size_t>(e)] != -1) {
          ok = false;
          return;
        }
        strip_of_[static_cast<std::size_t>(e)] = j;
      });
      if (!ok) throw std::invalid_argument("strips overlap or leave the ground set");
    }
  }

  /// Consecutive blocks of a permutation of {0..n-1}.
  static Split from_permutation(const std::vector<int>& perm, int m) {
    const int n = static_cast<int>(perm.size());
    if (m < 1 || n % m != 0) throw std::invalid_argument("strip count must divide n");
    const int width = n / m;
    std::vector<ElementSet> strips(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) strips[static_cast<std::size_t>(i / width)].insert(perm[static_cast<std::size_t>(i)]);
    return Split(n, std::move(strips));
  }

  /// Strips {0..w-1}, {w..2w-1}, ...
  static Split contiguous(int n, int m) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    return from_permutation(perm, m);
  }

  int n() const { return n_; }
  int rank() const { return static_cast<int>(strips_.size()); }
  int width() const { return n_ / rank(); }
  const std::vector<ElementSet>& strips() const { return strips_; }
  const ElementSet& strip(int j) const { return strips_.at(static_cast<std::size_t>(j)); }
  int strip_of(int element) const { return strip_of_.at(static_cast<std::size_t>(element)); }

  /// True iff the set meets every strip at most once.
  bool transversal(const ElementSet& s) const {
    std::uint64_t seen_lo = 0;
    std::vector<bool> seen;
    bool ok = true;
    s.for_each([&](int e) {
      if (!ok) return;
      if (e >= n_) {
        ok = false;
        return;
      }
      int j = strip_of_[static_cast<std::size_t>(e)];
      if (j < 64) {
        if ((seen_lo >> j) & 1U) ok = false;
        seen_lo |= std::uint64_t{1} << j;
      } else {
        if (seen.empty()) seen.assign(strips_.size(), false);
        if (seen[static_cast<std::size_t>(j)]) ok = false;
        seen[static_cast<std::size_t>(j)] = true;
      }
    });
    return ok;
  }

  friend bool operator==(const Split& a, const Split& b) { return a.n_ == b.n_ && a.strips_ == b.strips_; }

 private:
  int n_;
  std::vector<ElementSet> strips_;
  std::vector<int> strip_of_;
};

/**
 * Order-preserving selection of strips of a split. Rank 0 is allowed and
 * has an empty union.
 */
class Subsplit {
 public:
  Subsplit(std::shared_ptr<const Split> parent, std::vector<int> indices) : parent_(std::move(parent)), indices_(std::move(indices)) {
    if (!parent_) throw std::invalid_argument("subsplit without a parent split");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] < 0 || indices_[i] >= parent_->rank())
        throw std::invalid_argument("subsplit strip index out of range");
      if (i > 0 && indices_[i] <= indices_[i - 1]) throw std::invalid_argument("subsplit indices must strictly increase");
      union_ |= parent_->strip(indices_[i]);
    }
  }

  static Subsplit full(std::shared_ptr<const Split> parent) {
    std::vector<int> all(static_cast<std::size_t>(parent->rank()));
    for (int j = 0; j < parent->rank(); ++j) all[static_cast<std::size_t>(j)] = j;
    return Subsplit(std::move(parent), std::move(all));
  }

  /// The strips that s touches.
  static Subsplit touched_by(std::shared_ptr<const Split> parent, const ElementSet& s) {
    std::vector<bool> hit(static_cast<std::size_t>(parent->rank()), false);
    s.for_each([&](int e) { hit[static_cast<std::size_t>(parent->strip_of(e))] = true; });
    std::vector<int> idx;
    for (int j = 0; j < parent->rank(); ++j)
      if (hit[static_cast<std::size_t>(j)]) idx.push_back(j);
    return Subsplit(std::move(parent), std::move(idx));
  }

  const std::shared_ptr<const Split>& parent() const { return parent_; }
  const std::vector<int>& indices() const { return indices_; }
  int rank() const { return static_cast<int>(indices_.size()); }
  const ElementSet& union_set() const { return union_; }
  const ElementSet& strip(int position) const { return parent_->strip(indices_.at(static_cast<std::size_t>(position))); }

  bool has_strip(int index) const { return std::binary_search(indices_.begin(), indices_.end(), index); }

  /// Every strip of this subsplit is a strip of other.
  bool within(const Subsplit& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
  }

  /// Strips of the parent not in this subsplit.
  Subsplit complement() const {
    std::vector<int> rest;
    for (int j = 0; j < parent_->rank(); ++j)
      if (!has_strip(j)) rest.push_back(j);
    return Subsplit(parent_, std::move(rest));
  }

  Subsplit with_strip(int index) const {
    std::vector<int> idx = indices_;
    idx.insert(std::upper_bound(idx.begin(), idx.end(), index), index);
    return Subsplit(parent_, std::move(idx));
  }

  friend bool operator==(const Subsplit& a, const Subsplit& b) {
    return a.indices_ == b.indices_ && (a.parent_ == b.parent_ || *a.parent_ == *b.parent_);
  }

 private:
  std::shared_ptr<const Split> parent_;
  std::vector<int> indices_;
  ElementSet union_;
};

/// S lies in the union of sub and meets each of its strips at most once.
inline bool is_on_subsplit(const ElementSet& s, const Subsplit& sub) {
  if (!s.is_subset_of(sub.union_set())) return false;
  for (int p = 0; p < sub.rank(); ++p)
    if (s.intersection_size(sub.strip(p)) > 1) return false;
  return true;
}

inline SetFamily family_on_subsplit(const SetFamily& family, const Subsplit& sub) {
  return family.filter([&](const ElementSet& u) { return is_on_subsplit(u, sub); });
}

/// The strips of sub disjoint from b.
inline Subsplit subsplit_minus_set(const Subsplit& sub, const ElementSet& b) {
  std::vector<int> kept;
  for (int p = 0; p < sub.rank(); ++p)
    if (sub.strip(p).disjoint(b)) kept.push_back(sub.indices()[static_cast<std::size_t>(p)]);
  return Subsplit(sub.parent(), std::move(kept));
}

/// Number of unordered partitions of n elements into m equal strips.
inline BigInt split_count(int n, int m) {
  if (m < 1 || n % m != 0) return 0;
  const int w = n / m;
  return factorial(n) / (power(factorial(w), m) * factorial(m));
}

/**
 * Visits every unordered m-split of {0..n-1} once, strips listed by
 * increasing minimum element. fn returns false to stop early; the result
 * tells whether the enumeration completed.
 */
template <typename Fn>
bool for_each_split(int n, int m, Fn&& fn) {
  if (m < 1 || n % m != 0) throw std::invalid_argument("strip count must divide n");
  const int w = n / m;
  std::vector<ElementSet> strips;
  strips.reserve(static_cast<std::size_t>(m));
  auto recurse = [&](auto& self, ElementSet remaining) -> bool {
    if (remaining.empty()) return fn(Split(n, strips));
    const int head = remaining.first();
    ElementSet rest = remaining;
    rest.erase(head);
    return for_each_combination(rest, w - 1, [&](const ElementSet& others) {
      ElementSet strip = others;
      strip.insert(head);
      strips.push_back(strip);
      bool go_on = self(self, remaining - strip);
      strips.pop_back();
      return go_on;
    });
  };
  return recurse(recurse, ElementSet::prefix(n));
}

struct DenseSplitResult {
  Split split;
  std::size_t retained = 0;
  /// (n/m)^m |F| / C(n, m)
  Rational bound;
  std::uint64_t tries = 0;
  bool exhaustive = false;
};

class SplitSearchFailed : public std::runtime_error {
 public:
  SplitSearchFailed(const std::string& what, std::optional<Split> best, std::size_t retained, double ratio)
      : std::runtime_error(what), best_split(std::move(best)), best_retained(retained), achieved_ratio(ratio) {}

  std::optional<Split> best_split;
  std::size_t best_retained;
  /// best_retained / bound
  double achieved_ratio;
};

inline std::size_t count_on_split(const SetFamily& family, const Split& split) {
  std::size_t count = 0;
  for (const auto& u : family)
    if (split.transversal(u)) ++count;
  return count;
}

/// Target of the averaging bound: (n/m)^m |F| / C(n, m).
inline Rational dense_split_bound(int n, int m, std::size_t family_size) {
  return Rational{power(BigInt{n / m}, m) * family_size, binomial(n, m)};
}

/**
 * Finds an m-split keeping at least (n/m)^m |F| / C(n, m) members of F as
 * transversals. Random splits (uniform permutations cut into blocks) are
 * tried first; if none qualifies and the number of splits is at most
 * exhaustive_cap, every split is examined. The bound is the average over all
 * splits, so the exhaustive pass always succeeds.
 */
inline DenseSplitResult find_dense_split(const SetFamily& family, std::uint64_t seed, std::uint64_t max_tries,
                                         std::uint64_t exhaustive_cap = 200000) {
  const int n = family.n();
  const int m = family.m();
  if (family.empty()) throw std::invalid_argument("dense split search needs a nonempty family");
  if (m < 1 || n % m != 0)
    throw std::invalid_argument("m=" + std::to_string(m) + " must divide n=" + std::to_string(n) + " (pad the ground set)");

  const Rational bound = dense_split_bound(n, m, family.size());
  auto meets = [&](std::size_t count) { return Rational{static_cast<long long>(count)} >= bound; };

  std::optional<Split> best;
  std::size_t best_count = 0;
  Rng rng(seed);
  for (std::uint64_t t = 0; t < max_tries; ++t) {
    Split candidate = Split::from_permutation(rng.permutation(n), m);
    std::size_t count = count_on_split(family, candidate);
    if (meets(count)) return {candidate, count, bound, t + 1, false};
    if (!best || count > best_count) {
      best = candidate;
      best_count = count;
    }
  }

  if (split_count(n, m) <= exhaustive_cap) {
    std::optional<DenseSplitResult> found;
    for_each_split(n, m, [&](const Split& s) {
      std::size_t count = count_on_split(family, s);
      if (meets(count)) {
        found = DenseSplitResult{s, count, bound, max_tries, true};
        return false;
      }
      return true;
    });
    if (found) return *found;
  }

  double ratio = best ? static_cast<double>(best_count) / to_double(bound) : 0.0;
  throw SplitSearchFailed("no split met the averaging bound within " + std::to_string(max_tries) +
                              " random tries and the exhaustive cap",
                          best, best_count, ratio);
}

}  // namespace sunflower
