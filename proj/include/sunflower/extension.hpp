#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "sunflower/family.hpp"
#include "sunflower/numeric.hpp"

namespace sunflower {

struct ExtensionResult {
  SetFamily family;
  int source_m = 0;
  int l = 0;
};

/**
 * Ext(F, l): every l-subset of the ground set containing some member of F.
 *
 * Small families are grown upward from each member; when the number of
 * supersets to generate reaches C(n, l) the l-sets are filtered directly.
 */
inline ExtensionResult extend(const SetFamily& family, int l) {
  const int n = family.n();
  const int m = family.m();
  if (l < m || l > n)
    throw std::invalid_argument("extension size l=" + std::to_string(l) + " outside m..n = " + std::to_string(m) + ".." +
                                std::to_string(n));
  if (l == m) return {family.unweighted(), m, l};

  const GroundSet ground = family.ground();
  const BigInt grown = BigInt{family.size()} * binomial(n - m, l - m);
  std::vector<ElementSet> out;
  if (grown < binomial(n, l)) {
    std::unordered_set<ElementSet, ElementSetHash> seen;
    for (const auto& u : family) {
      for_each_combination(ground.all() - u, l - m, [&](const ElementSet& extra) {
        ElementSet t = u | extra;
        if (seen.insert(t).second) out.push_back(t);
      });
    }
    std::sort(out.begin(), out.end());
  } else {
    for_each_combination(ground.all(), l, [&](const ElementSet& t) {
      // Enumerate m-subsets of t only when that is cheaper than scanning F.
      bool hit = false;
      if (binomial(l, m) < BigInt{family.size()}) {
        for_each_combination(t, m, [&](const ElementSet& u) {
          if (family.contains(u)) {
            hit = true;
            return false;
          }
          return true;
        });
      } else {
        hit = std::any_of(family.begin(), family.end(), [&](const ElementSet& u) { return u.is_subset_of(t); });
      }
      if (hit) out.push_back(t);
    });
  }
  return {SetFamily::from_sorted(ground, l, std::move(out)), m, l};
}

struct KappaCheck {
  bool holds = false;
  double kappa_source = 0;
  double kappa_extension = 0;
};

/// kappa[Ext(F, l)] <= kappa(F). Decided exactly as |Ext| C(n,m) >= |F| C(n,l).
inline KappaCheck check_kappa_monotone(const SetFamily& family, int l) {
  if (family.empty()) throw std::invalid_argument("kappa check needs a nonempty family");
  ExtensionResult ext = extend(family, l);
  KappaCheck out;
  out.kappa_source = sparsity(family);
  out.kappa_extension = sparsity(ext.family);
  const int n = family.n();
  out.holds = BigInt{ext.family.size()} * binomial(n, family.m()) >= BigInt{family.size()} * binomial(n, l);
  return out;
}

struct Phase2Check {
  bool holds = false;
  /// kappa[C(X, 2m) - Ext(F, 2m)]
  double lhs = 0;
  /// 2 kappa[C(X, m) - F]
  double rhs = 0;
};

/**
 * kappa of the complement of Ext(F, 2m) against twice the kappa of the
 * complement of F. With A = C(n,2m) - |Ext| and B = C(n,m) - |F| the
 * inequality is C(n,2m) B^2 >= C(n,m)^2 A, evaluated in exact integers; an
 * empty complement counts as +inf.
 */
inline Phase2Check check_phase2(const SetFamily& family) {
  const int n = family.n();
  const int m = family.m();
  if (2 * m > n) throw std::invalid_argument("phase-2 check needs m <= n/2");
  ExtensionResult ext = extend(family, 2 * m);
  const BigInt full_2m = binomial(n, 2 * m);
  const BigInt full_m = binomial(n, m);
  const BigInt a = full_2m - BigInt{ext.family.size()};
  const BigInt b = full_m - BigInt{family.size()};

  Phase2Check out;
  out.lhs = log_ratio(full_2m, a);
  const double single = log_ratio(full_m, b);
  out.rhs = 2 * single;
  if (a == 0)
    out.holds = true;
  else if (b == 0)
    out.holds = false;
  else
    out.holds = full_2m * b * b >= full_m * full_m * a;
  return out;
}

struct ExtensionStep {
  int l = 0;
  std::size_t size = 0;
  double kappa = 0;
};

struct IteratedExtension {
  ExtensionResult result;
  /// The source family first, then one entry per extension performed.
  std::vector<ExtensionStep> steps;
};

/**
 * Ext(F, target_l) reached by doubling the set size while 2l <= target_l,
 * then one final extension to target_l if needed. Extension composes, so the
 * result equals extend(F, target_l); the intermediate sparsities are kept.
 */
inline IteratedExtension iterated_extend(const SetFamily& family, int target_l) {
  const int m = family.m();
  if (target_l < m || target_l > family.n())
    throw std::invalid_argument("extension size l=" + std::to_string(target_l) + " outside m..n");
  IteratedExtension out{{family.unweighted(), m, m}, {{m, family.size(), sparsity(family)}}};
  SetFamily current = family.unweighted();
  int l = m;
  auto step_to = [&](int next) {
    current = extend(current, next).family;
    l = next;
    out.steps.push_back({l, current.size(), sparsity(current)});
  };
  while (l > 0 && 2 * l <= target_l) step_to(2 * l);
  if (l < target_l) step_to(target_l);
  out.result = {current, m, l};
  return out;
}

}  // namespace sunflower
