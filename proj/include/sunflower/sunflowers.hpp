#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sunflower/element_set.hpp"
#include "sunflower/family.hpp"
#include "sunflower/numeric.hpp"

namespace sunflower {

struct SunflowerCertificate {
  std::vector<ElementSet> petals;
  ElementSet core;
};

/**
 * The common core if all pairwise intersections coincide.
 *
 * Pairwise intersections all equal C exactly when C is the intersection of
 * every set and the parts outside C are pairwise disjoint.
 */
inline std::optional<ElementSet> is_sunflower(std::span<const ElementSet> sets) {
  if (sets.size() < 2) throw std::invalid_argument("a sunflower needs at least two sets");
  std::vector<ElementSet> sorted(sets.begin(), sets.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("sunflower candidates must be distinct");
  ElementSet core = sets[0];
  for (const auto& s : sets) core &= s;
  ElementSet seen;
  for (const auto& s : sets) {
    ElementSet petal = s - core;
    if (petal.intersects(seen)) return std::nullopt;
    seen |= petal;
  }
  return core;
}

inline std::optional<ElementSet> is_sunflower(const std::vector<ElementSet>& sets) {
  return is_sunflower(std::span<const ElementSet>(sets));
}

namespace detail {

enum class PackingOrder { by_degree, lexicographic };

/**
 * Branch and bound for `need` pairwise-disjoint sets among `items`.
 * Returns positions into items. With lexicographic order the first packing
 * found is the lexicographically smallest when items are sorted.
 */
class DisjointPacker {
 public:
  DisjointPacker(std::span<const ElementSet> items, PackingOrder order, std::uint64_t node_budget = 0)
      : items_(items), budget_(node_budget) {
    order_.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) order_[i] = i;
    min_size_ = items.empty() ? 0 : items[0].size();
    for (const auto& s : items) min_size_ = std::min(min_size_, s.size());
    if (order == PackingOrder::by_degree) {
      std::vector<std::size_t> degree(items.size(), 0);
      for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j)
          if (items[i].intersects(items[j])) {
            ++degree[i];
            ++degree[j];
          }
      std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
    }
  }

  std::optional<std::vector<std::size_t>> find(int need) {
    chosen_.clear();
    nodes_ = 0;
    exhausted_ = false;
    if (need <= 0) return std::vector<std::size_t>{};
    std::vector<std::size_t> candidates = order_;
    if (search(candidates, need, ElementSet{})) return chosen_;
    return std::nullopt;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool budget_exhausted() const { return exhausted_; }

 private:
  bool search(const std::vector<std::size_t>& candidates, int need, const ElementSet& used) {
    if (need == 0) return true;
    ++nodes_;
    if (budget_ != 0 && nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    if (static_cast<int>(candidates.size()) < need) return false;
    if (min_size_ > 0) {
      ElementSet reach;
      for (std::size_t c : candidates) reach |= items_[c];
      if (reach.size() / min_size_ < need) return false;
    }
    for (std::size_t pos = 0; pos + static_cast<std::size_t>(need) <= candidates.size(); ++pos) {
      const std::size_t pick = candidates[pos];
      ElementSet next_used = used | items_[pick];
      std::vector<std::size_t> rest;
      rest.reserve(candidates.size() - pos);
      for (std::size_t q = pos + 1; q < candidates.size(); ++q)
        if (items_[candidates[q]].disjoint(items_[pick])) rest.push_back(candidates[q]);
      chosen_.push_back(pick);
      if (search(rest, need - 1, next_used)) return true;
      chosen_.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  std::span<const ElementSet> items_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> chosen_;
  int min_size_ = 0;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

/// Candidate cores: the empty set and every pairwise intersection, sorted.
inline std::vector<ElementSet> candidate_cores(std::span<const ElementSet> sets) {
  std::vector<ElementSet> cores{ElementSet{}};
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) cores.push_back(sets[i] & sets[j]);
  std::sort(cores.begin(), cores.end());
  cores.erase(std::unique(cores.begin(), cores.end()), cores.end());
  return cores;
}

}  // namespace detail

/**
 * Finds a k-sunflower in F if one exists.
 *
 * The core of a sunflower with k >= 2 petals is the intersection of two of
 * its members, so only pairwise intersections (and the empty set) are tried.
 * For each core C the parts U - C of members U containing C are searched for
 * k pairwise-disjoint ones. Cores are scanned in lexicographic order and the
 * lexicographically smallest petal tuple of the first productive core is
 * returned.
 */
inline std::optional<SunflowerCertificate> find_sunflower(const SetFamily& family, int k) {
  if (k < 2) throw std::invalid_argument("sunflowers need k >= 2");
  if (family.size() < static_cast<std::size_t>(k)) return std::nullopt;
  for (const ElementSet& core : detail::candidate_cores(family.sets())) {
    std::vector<ElementSet> members;
    std::vector<ElementSet> petals;
    for (const auto& u : family) {
      if (!core.is_subset_of(u)) continue;
      members.push_back(u);
      petals.push_back(u - core);
    }
    if (members.size() < static_cast<std::size_t>(k)) continue;
    detail::DisjointPacker fast(petals, detail::PackingOrder::by_degree);
    if (!fast.find(k)) continue;
    detail::DisjointPacker lex(petals, detail::PackingOrder::lexicographic);
    auto picked = lex.find(k);
    SunflowerCertificate cert;
    cert.core = core;
    for (std::size_t p : *picked) cert.petals.push_back(members[p]);
    return cert;
  }
  return std::nullopt;
}

struct ExtremalResult {
  std::size_t size = 0;
  std::vector<ElementSet> family;
  /// False when the node budget ran out before the search completed.
  bool exact = true;
  std::uint64_t nodes = 0;
};

/**
 * Largest k-sunflower-free subfamily of C([n], m), by include/exclude branch
 * and bound over the m-sets in lexicographic order.
 *
 * Relabeling maps any nonempty family onto one containing {1..m}, so the
 * search only explores families that contain it.
 */
inline ExtremalResult max_sunflower_free(int n, int m, int k, std::uint64_t budget) {
  if (k < 2) throw std::invalid_argument("sunflowers need k >= 2");
  if (n < 1 || n > kMaxElements || m < 0 || m > n) throw std::invalid_argument("need 0 <= m <= n");
  std::vector<ElementSet> all;
  for_each_combination(ElementSet::prefix(n), m, [&](const ElementSet& s) { all.push_back(s); });

  ExtremalResult best;
  if (all.empty()) return best;
  best.size = 1;
  best.family = {all[0]};

  std::vector<ElementSet> chosen{all[0]};
  std::uint64_t nodes = 0;
  bool out_of_budget = false;

  auto completes_sunflower = [&](const ElementSet& u) {
    std::map<ElementSet, std::vector<ElementSet>> by_core;
    for (const auto& v : chosen) {
      ElementSet core = u & v;
      by_core[core].push_back(v - core);
    }
    for (const auto& [core, petals] : by_core) {
      if (static_cast<int>(petals.size()) < k - 1) continue;
      detail::DisjointPacker packer(petals, detail::PackingOrder::by_degree);
      if (packer.find(k - 1)) return true;
    }
    return false;
  };

  auto dfs = [&](auto& self, std::size_t index) -> void {
    if (out_of_budget) return;
    if (++nodes > budget) {
      out_of_budget = true;
      return;
    }
    if (chosen.size() > best.size) {
      best.size = chosen.size();
      best.family = chosen;
    }
    if (index >= all.size()) return;
    if (chosen.size() + (all.size() - index) <= best.size) return;
    const ElementSet& u = all[index];
    if (!completes_sunflower(u)) {
      chosen.push_back(u);
      self(self, index + 1);
      chosen.pop_back();
    }
    self(self, index + 1);
  };
  dfs(dfs, 1);
  best.exact = !out_of_budget;
  best.nodes = nodes;
  return best;
}

struct BoundRow {
  int k = 0;
  int m = 0;
  /// m! (k-1)^m
  BigInt classical;
  /// (c k ln(k+1))^m
  double bound = 0;
};

inline std::vector<BoundRow> bound_table(int k_min, int k_max, int m_min, int m_max, double c) {
  if (!(c > 0)) throw std::invalid_argument("bound table needs c > 0");
  if (k_min < 2 || k_max < k_min || m_min < 1 || m_max < m_min) throw std::invalid_argument("empty or invalid bound table range");
  std::vector<BoundRow> rows;
  for (int k = k_min; k <= k_max; ++k)
    for (int m = m_min; m <= m_max; ++m)
      rows.push_back({k, m, factorial(m) * power(BigInt{k - 1}, m), std::pow(c * k * std::log(k + 1.0), m)});
  return rows;
}

}  // namespace sunflower
