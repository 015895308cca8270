#pragma once

// Brute-force reference implementations over plain 32-bit masks. They share
// no algorithm with the library; tests convert families to masks and compare.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "sunflower.hpp"

namespace oracle {

using sunflower::BigInt;
using sunflower::Rational;
using Mask = std::uint32_t;

struct Family {
  int n = 0;
  int m = 0;
  std::vector<Mask> sets;
  std::vector<Rational> weights;
};

inline Mask to_mask(const sunflower::ElementSet& s) {
  Mask out = 0;
  s.for_each([&](int e) { out |= Mask{1} << e; });
  return out;
}

inline sunflower::ElementSet from_mask(Mask mask) {
  sunflower::ElementSet s;
  for (int e = 0; e < 32; ++e)
    if (mask >> e & 1u) s.insert(e);
  return s;
}

inline Family convert(const sunflower::SetFamily& f) {
  Family out{f.n(), f.m(), {}, {}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.sets.push_back(to_mask(f[i]));
    out.weights.push_back(f.weight_at(i));
  }
  return out;
}

inline int popcount(Mask x) { return std::popcount(x); }

inline std::vector<int> elements(Mask x) {
  std::vector<int> out;
  for (int e = 0; e < 32; ++e)
    if (x >> e & 1u) out.push_back(e);
  return out;
}

/// Lexicographic order on sorted element lists.
inline bool lex_less(Mask a, Mask b) {
  auto ea = elements(a), eb = elements(b);
  return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

struct GammaAnswer {
  bool holds = true;
  std::optional<Mask> witness;
};

/// Every nonempty S of the ground set, exact arithmetic.
inline GammaAnswer gamma(const Family& f, double b) {
  const Rational rb = sunflower::exact_rational(b);
  Rational total = 0;
  for (const auto& w : f.weights) total += w;
  GammaAnswer out;
  for (Mask s = 1; s < (Mask{1} << f.n); ++s) {
    Rational link = 0;
    for (std::size_t i = 0; i < f.sets.size(); ++i)
      if ((f.sets[i] & s) == s) link += f.weights[i];
    Rational scaled = link;
    for (int j = 0; j < popcount(s); ++j) scaled *= rb;
    if (!(scaled < total)) {
      out.holds = false;
      if (!out.witness || lex_less(s, *out.witness)) out.witness = s;
    }
  }
  return out;
}

/// Pairwise intersections of the chosen sets all coincide.
inline bool is_sunflower(const std::vector<Mask>& sets) {
  const Mask core = sets[0] & sets[1];
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      if ((sets[i] & sets[j]) != core) return false;
  return true;
}

/// Some k-subset of the family is a sunflower.
inline bool has_sunflower(const std::vector<Mask>& sets, int k) {
  const int size = static_cast<int>(sets.size());
  if (size < k) return false;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<Mask> pick;
    for (int i : idx) pick.push_back(sets[static_cast<std::size_t>(i)]);
    if (is_sunflower(pick)) return true;
    int p = k - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == size - k + p) --p;
    if (p < 0) return false;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
}

/// All l-subsets of [n] that contain some member.
inline std::vector<Mask> extension(const Family& f, int l) {
  std::vector<Mask> out;
  for (Mask t = 0; t < (Mask{1} << f.n); ++t) {
    if (popcount(t) != l) continue;
    if (std::any_of(f.sets.begin(), f.sets.end(), [&](Mask u) { return (u & t) == u; })) out.push_back(t);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

/// Mean over all n! orderings, chopped into m blocks, of the members meeting
/// every block once.
inline Rational split_average(const Family& f) {
  std::vector<int> perm(static_cast<std::size_t>(f.n));
  std::iota(perm.begin(), perm.end(), 0);
  const int width = f.n / f.m;
  BigInt total = 0, count = 0;
  do {
    std::vector<int> block(static_cast<std::size_t>(f.n));
    for (int i = 0; i < f.n; ++i) block[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i / width;
    for (Mask u : f.sets) {
      Mask seen = 0;
      bool ok = true;
      for (int e : elements(u)) {
        const Mask bit = Mask{1} << block[static_cast<std::size_t>(e)];
        ok = ok && !(seen & bit);
        seen |= bit;
      }
      if (ok) ++total;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Rational{total, count};
}

/// Largest subfamily of C([n], m) with no k-sunflower, over all 2^C(n,m)
/// subfamilies.
inline std::size_t max_sunflower_free(int n, int m, int k) {
  std::vector<Mask> all;
  for (Mask t = 0; t < (Mask{1} << n); ++t)
    if (popcount(t) == m) all.push_back(t);
  std::size_t best = 0;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << all.size()); ++pick) {
    const auto size = static_cast<std::size_t>(std::popcount(pick));
    if (size <= best) continue;
    std::vector<Mask> chosen;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (pick >> i & 1u) chosen.push_back(all[i]);
    if (!has_sunflower(chosen, k)) best = size;
  }
  return best;
}

}  // namespace oracle

namespace gen {

/// Random m-uniform family on [n], each m-set kept with probability p.
/// Weights, when requested, are a/b with a in 0..12 and b in 1..7.
inline sunflower::SetFamily random_family(sunflower::Rng& rng, int n, int m, double p, bool weighted = false) {
  std::vector<sunflower::ElementSet> sets;
  std::vector<sunflower::Rational> weights;
  sunflower::for_each_combination(sunflower::ElementSet::prefix(n), m, [&](const sunflower::ElementSet& s) {
    if (!(rng.uniform01() < p)) return;
    sets.push_back(s);
    const auto a = static_cast<long long>(rng.below(13));
    const auto b = static_cast<long long>(rng.below(7)) + 1;
    weights.emplace_back(a, b);
  });
  if (weighted) return sunflower::SetFamily(sunflower::GroundSet(n), m, std::move(sets), std::move(weights));
  return sunflower::SetFamily(sunflower::GroundSet(n), m, std::move(sets));
}

/// Random family with exactly `count` members (or all of them if fewer exist).
inline sunflower::SetFamily random_family_of_size(sunflower::Rng& rng, int n, int m, std::size_t count) {
  std::vector<sunflower::ElementSet> all;
  sunflower::for_each_combination(sunflower::ElementSet::prefix(n), m, [&](const sunflower::ElementSet& s) { all.push_back(s); });
  rng.shuffle(all);
  if (all.size() > count) all.resize(count);
  return sunflower::SetFamily(sunflower::GroundSet(n), m, std::move(all));
}

/// Uniform integer in [lo, hi].
inline int between(sunflower::Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

}  // namespace gen
