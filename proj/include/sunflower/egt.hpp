#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "sunflower/family.hpp"
#include "sunflower/numeric.hpp"
#include "sunflower/random.hpp"

namespace sunflower {

struct EgtParams {
  int l = 0;
  double gamma = 0;
  double eps = 0;
  std::uint64_t sample_budget = 100000;
  std::uint64_t seed = 0;
};

enum class EgtMode { exhaustive, sampled };

inline const char* to_string(EgtMode mode) { return mode == EgtMode::exhaustive ? "exhaustive" : "sampled"; }

struct EgtReport {
  double fraction_within = 0;
  double lower_factor = 0;
  double upper_factor = 0;
  /// Gamma(4 gamma n / l) on the family's norm.
  bool gamma_holds = false;
  double gamma_b = 0;
  /// gamma in [eps^-2, l/m]
  bool gamma_in_range = false;
  EgtMode mode = EgtMode::exhaustive;
  std::uint64_t evaluated = 0;
  std::uint64_t within = 0;
  /// C(l,m)/C(n,m) ||F||
  Rational center;
  /// Mean of ||F & C(Y,m)|| over the evaluated Y.
  Rational mean;
  double min_value = 0;
  double max_value = 0;
};

/**
 * For l-sets Y, measures ||F & C(Y, m)|| against the window
 * (1 -/+ sqrt(2/(eps gamma))) C(l,m)/C(n,m) ||F||.
 *
 * All l-sets are visited when there are at most sample_budget of them;
 * otherwise sample_budget uniform l-sets are drawn from the seed. The Gamma
 * hypothesis is evaluated and reported but never enforced, since at small n
 * it is usually unsatisfiable.
 */
inline EgtReport egt_fraction(const SetFamily& family, const EgtParams& params) {
  const int n = family.n();
  const int m = family.m();
  if (params.l < m || params.l > n)
    throw std::invalid_argument("l=" + std::to_string(params.l) + " outside m..n = " + std::to_string(m) + ".." + std::to_string(n));
  if (!(params.eps > 0 && params.eps < 1)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(params.gamma > 0) || !std::isfinite(params.gamma)) throw std::invalid_argument("gamma must be positive and finite");
  const Rational total = norm(family);
  if (total == 0) throw std::domain_error("egt check needs a family of positive norm");

  EgtReport report;
  const double slack = std::sqrt(2.0 / (params.eps * params.gamma));
  report.lower_factor = 1.0 - slack;
  report.upper_factor = 1.0 + slack;
  report.gamma_b = 4.0 * params.gamma * n / params.l;
  report.gamma_holds = gamma_check(family, report.gamma_b).holds;
  report.gamma_in_range = params.gamma >= 1.0 / (params.eps * params.eps) && params.gamma <= static_cast<double>(params.l) / m;
  report.center = Rational{binomial(params.l, m), binomial(n, m)} * total;

  const long double center = static_cast<long double>(to_double(report.center));
  const long double lo = report.lower_factor * center;
  const long double hi = report.upper_factor * center;
  Rational sum = 0;
  bool first = true;

  auto visit = [&](const ElementSet& y) {
    Rational value = 0;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (family[i].is_subset_of(y)) value += family.weight_at(i);
    const double v = to_double(value);
    if (lo < v && v < hi) ++report.within;
    if (first || v < report.min_value) report.min_value = v;
    if (first || v > report.max_value) report.max_value = v;
    first = false;
    sum += value;
    ++report.evaluated;
  };

  const ElementSet all = family.ground().all();
  if (binomial(n, params.l) <= params.sample_budget) {
    report.mode = EgtMode::exhaustive;
    for_each_combination(all, params.l, visit);
  } else {
    report.mode = EgtMode::sampled;
    Rng rng(params.seed);
    for (std::uint64_t t = 0; t < params.sample_budget; ++t) visit(rng.sample_subset(all, params.l));
  }
  if (report.evaluated > 0) {
    report.mean = sum / Rational{BigInt{report.evaluated}};
    report.fraction_within = static_cast<double>(report.within) / static_cast<double>(report.evaluated);
  }
  return report;
}

}  // namespace sunflower
