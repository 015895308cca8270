#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sunflower/element_set.hpp"
#include "sunflower/family.hpp"
#include "sunflower/numeric.hpp"
#include "sunflower/split.hpp"

namespace sunflower {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised only when assert_bounds is set and a measured target misses.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Every constant of the construction. derived() computes them from
 * eps, k and m; at any eps of practical interest those values overflow or
 * make every threshold vacuous, so desk-scale runs set them explicitly.
 */
struct PipelineConfig {
  int k = 3;
  double eps = 0.5;
  double h = 0;
  double c = 0;
  double b = 0;
  double delta = 0;
  /// |C| <= core_cap * m
  double core_cap = 0;
  /// f(x) = f_theta * f_rho^-x * |F|
  double f_theta = 0;
  double f_rho = 0;
  /// Reconstruct drops F_i[U] when |F_i[U]| > reconstruct_ratio^-(r+1) |F_i[B]|.
  double reconstruct_ratio = 0;
  /// Reconstruct skips groups below group_floor * |F(Z)|; 3^-m when unset.
  std::optional<double> group_floor;
  /// Petal window delta (1 - slack_low) |F_i| < |F_i^Y| < delta (1 + slack_high) |F_i|.
  double slack_low = 0;
  double slack_high = 0;
  /// Lifting rounds per partial sunflower.
  int lift_rounds = 1;
  /// Seed sets are enumerated when C(|strip|, d) <= lift_enum_cap, else sampled.
  std::uint64_t lift_enum_cap = 20000;
  std::uint64_t lift_samples = 4096;
  /// Node budget for the disjoint petal tuple search.
  std::uint64_t tuple_budget = 1000000;
  bool assert_bounds = false;

  static PipelineConfig derived(double eps, int k, int m) {
    PipelineConfig cfg;
    cfg.k = k;
    cfg.eps = eps;
    const double lnk = std::log(static_cast<double>(k));
    cfg.h = std::exp(1.0 / eps);
    cfg.c = std::exp(cfg.h);
    cfg.b = cfg.c * k * lnk;
    cfg.delta = eps / (k * lnk);
    cfg.core_cap = 1.0 / cfg.c;
    cfg.f_theta = std::pow(eps, 3.0 * m) / k;
    cfg.f_rho = std::pow(cfg.c, cfg.h) * k;
    cfg.reconstruct_ratio = std::pow(cfg.c, std::sqrt(cfg.h)) * k * lnk;
    cfg.slack_low = std::exp(-cfg.h);
    cfg.slack_high = std::exp(-cfg.h);
    cfg.lift_rounds = static_cast<int>(std::ceil(1.0 / std::sqrt(eps)));
    return cfg;
  }

  double f(int x, std::size_t family_size) const {
    return f_theta * std::pow(f_rho, -static_cast<double>(x)) * static_cast<double>(family_size);
  }

  double group_floor_for(int m) const { return group_floor ? *group_floor : std::pow(3.0, -m); }

  double delta_prime() const { return 2.0 * delta * std::log(static_cast<double>(k)); }

  void validate() const {
    auto finite_positive = [](const char* name, double v) {
      if (!std::isfinite(v) || !(v > 0))
        throw ConfigError(std::string(name) + " must be finite and positive (got " + std::to_string(v) +
                          "); the derived constants overflow, pass explicit values");
    };
    if (k < 2) throw ConfigError("k must be at least 2");
    if (!(eps > 0 && eps < 1)) throw ConfigError("eps must lie in (0, 1)");
    finite_positive("h", h);
    finite_positive("c", c);
    finite_positive("b", b);
    finite_positive("delta", delta);
    finite_positive("f_theta", f_theta);
    finite_positive("f_rho", f_rho);
    finite_positive("reconstruct_ratio", reconstruct_ratio);
    if (!std::isfinite(core_cap) || core_cap < 0) throw ConfigError("core_cap must be finite and nonnegative");
    if (!std::isfinite(slack_low) || slack_low < 0) throw ConfigError("slack_low must be finite and nonnegative");
    if (!std::isfinite(slack_high) || slack_high < 0) throw ConfigError("slack_high must be finite and nonnegative");
    if (group_floor && (!std::isfinite(*group_floor) || *group_floor < 0)) throw ConfigError("group_floor must be nonnegative");
    if (lift_rounds < 1) throw ConfigError("lift_rounds must be at least 1");
  }
};

/// floor(delta * width), robust to the rounding of delta.
inline int seed_size(double delta, int width) {
  return static_cast<int>(std::floor(delta * width + 1e-9));
}

/**
 * (C, Y_1; F_1, ..., Y_k; F_k) on a subsplit. After reconstruct, `target`
 * holds the subsplit one strip larger that the next lift grows into.
 */
struct PartialSunflower {
  ElementSet core;
  Subsplit subsplit;
  std::optional<Subsplit> target;
  std::vector<ElementSet> seeds;
  std::vector<SetFamily> petals;
};

struct Psf {
  int rank = 0;
  std::vector<PartialSunflower> elements;

  bool empty() const { return elements.empty(); }
};

/// |F(Z)|: distinct sets over every petal family of every element.
inline std::size_t union_size(const Psf& zz) {
  std::unordered_set<ElementSet, ElementSetHash> all;
  for (const auto& z : zz.elements)
    for (const auto& fam : z.petals) all.insert(fam.begin(), fam.end());
  return all.size();
}

/// F(Z) as a family (unit weights).
inline SetFamily union_family(const Psf& zz, GroundSet ground, int m) {
  std::vector<ElementSet> all;
  for (const auto& z : zz.elements)
    for (const auto& fam : z.petals) all.insert(all.end(), fam.begin(), fam.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return SetFamily::from_sorted(ground, m, std::move(all));
}

struct ConditionResult {
  std::string name;
  bool passed = true;
  std::string counterexample;
};

struct PsfValidation {
  std::vector<ConditionResult> conditions;
  /// Separate from ok(): a desk-scale run may be structurally sound without
  /// meeting the size threshold.
  std::optional<bool> normal;
  std::size_t size = 0;
  double normal_threshold = 0;

  /// All structural conditions hold.
  bool ok() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.passed; });
  }

  const ConditionResult* failed() const {
    for (const auto& c : conditions)
      if (!c.passed) return &c;
    return nullptr;
  }
};

namespace detail {

inline void fail_once(ConditionResult& cond, const std::string& why) {
  if (cond.passed) {
    cond.passed = false;
    cond.counterexample = why;
  }
}

inline std::string where(std::size_t element, std::size_t petal) {
  return "element " + std::to_string(element) + " petal " + std::to_string(petal + 1);
}

}  // namespace detail

/**
 * Checks the partial sunflower conditions on every element, the universal
 * disjoint property, rank consistency, and (when f_hat is given) that every
 * petal family lies in f_hat. With r0 set, r-normality is evaluated too.
 */
inline PsfValidation validate_psf(const Psf& zz, int m, const PipelineConfig& cfg, const SetFamily* f_hat = nullptr,
                                  std::optional<int> r0 = std::nullopt) {
  PsfValidation out;
  ConditionResult rank{"rank", true, {}}, core_cond{"core", true, {}}, seeds_cond{"seeds", true, {}}, petals_cond{"petals", true, {}}, balance_cond{"balance", true, {}},
      disjoint{"universal-disjoint", true, {}};

  std::unordered_map<ElementSet, std::size_t, ElementSetHash> owner;
  for (std::size_t e = 0; e < zz.elements.size(); ++e) {
    const PartialSunflower& z = zz.elements[e];
    const std::string here = "element " + std::to_string(e);
    if (z.subsplit.rank() != zz.rank)
      detail::fail_once(rank, here + " has subsplit rank " + std::to_string(z.subsplit.rank()) + ", expected " + std::to_string(zz.rank));
    if (z.petals.size() != static_cast<std::size_t>(cfg.k) || z.seeds.size() != static_cast<std::size_t>(cfg.k)) {
      detail::fail_once(rank, here + " does not carry k=" + std::to_string(cfg.k) + " petals and seeds");
      continue;
    }
    if (z.target && (z.target->rank() != zz.rank + 1 || !z.subsplit.within(*z.target)))
      detail::fail_once(rank, here + " has a target subsplit that does not extend its subsplit by one strip");

    // core on the subsplit, within the cap
    if (!is_on_subsplit(z.core, z.subsplit)) detail::fail_once(core_cond, here + ": core " + z.core.to_string() + " is not on the subsplit");
    if (z.core.size() > cfg.core_cap * m + 1e-9)
      detail::fail_once(core_cond, here + ": |C|=" + std::to_string(z.core.size()) + " exceeds core_cap*m");

    // seeds: disjoint, on the free strips, delta-sized per strip
    const Subsplit free = subsplit_minus_set(z.subsplit, z.core);
    const int expected = seed_size(cfg.delta, z.subsplit.parent()->width());
    ElementSet seen;
    for (std::size_t i = 0; i < z.seeds.size(); ++i) {
      const ElementSet& y = z.seeds[i];
      if (!y.is_subset_of(free.union_set())) detail::fail_once(seeds_cond, detail::where(e, i) + ": seed leaves the free strips");
      if (y.intersects(seen)) detail::fail_once(seeds_cond, detail::where(e, i) + ": seeds overlap");
      seen |= y;
      for (int p = 0; p < free.rank(); ++p)
        if (y.intersection_size(free.strip(p)) != expected)
          detail::fail_once(seeds_cond, detail::where(e, i) + ": seed meets strip " + std::to_string(free.indices()[static_cast<std::size_t>(p)] + 1) +
                                     " in " + std::to_string(y.intersection_size(free.strip(p))) + " elements, expected " +
                                     std::to_string(expected));
    }

    // members keep the core and stay inside their seed
    for (std::size_t i = 0; i < z.petals.size(); ++i) {
      const SetFamily& fam = z.petals[i];
      if (fam.empty()) detail::fail_once(petals_cond, detail::where(e, i) + ": empty petal family");
      const ElementSet forbidden = free.union_set() - z.seeds[i];
      for (const auto& u : fam) {
        if (!z.core.is_subset_of(u)) detail::fail_once(petals_cond, detail::where(e, i) + ": member " + u.to_string() + " misses the core");
        if (u.intersects(forbidden))
          detail::fail_once(petals_cond, detail::where(e, i) + ": member " + u.to_string() + " uses a free strip outside its seed");
        if (f_hat && !f_hat->contains(u)) detail::fail_once(petals_cond, detail::where(e, i) + ": member " + u.to_string() + " not in the base family");
      }
    }
    if (free.rank() == 0)
      for (std::size_t i = 1; i < z.petals.size(); ++i)
        if (!(z.petals[i].sets() == z.petals[0].sets()))
          detail::fail_once(petals_cond, here + ": rank of free strips is 0 but petal families differ");

    // no petal family reaches twice another
    for (std::size_t i = 0; i < z.petals.size(); ++i)
      for (std::size_t j = 0; j < z.petals.size(); ++j)
        if (i != j && !(z.petals[i].size() < 2 * z.petals[j].size()))
          detail::fail_once(balance_cond, detail::where(e, i) + ": |F_i|=" + std::to_string(z.petals[i].size()) + " not below twice |F_j|=" +
                                     std::to_string(z.petals[j].size()));

    // universal disjointness across elements
    for (const auto& fam : z.petals)
      for (const auto& u : fam) {
        auto [it, inserted] = owner.emplace(u, e);
        if (!inserted && it->second != e)
          detail::fail_once(disjoint, "member " + u.to_string() + " occurs in elements " + std::to_string(it->second) + " and " +
                                          std::to_string(e));
      }
  }
  out.size = owner.size();
  out.conditions = {rank, core_cond, seeds_cond, petals_cond, balance_cond, disjoint};
  if (f_hat && r0) {
    out.normal_threshold = std::pow(cfg.eps, 2.0 * (zz.rank - *r0)) * static_cast<double>(f_hat->size());
    out.normal = static_cast<double>(out.size) >= out.normal_threshold;
  }
  return out;
}

inline PsfValidation validate_psf(const Psf& zz, const SetFamily& f_hat, const PipelineConfig& cfg, int r0) {
  return validate_psf(zz, f_hat.m(), cfg, &f_hat, r0);
}

/**
 * Trims the petal families of z so that no one reaches twice the size of
 * another, keeping the lexicographically first members. The kept size is
 * min(|F_i|, 2 min_j |F_j| - 1), which enforces the strict inequality.
 */
inline void normalize(PartialSunflower& z) {
  if (z.petals.empty()) return;
  std::size_t smallest = z.petals[0].size();
  for (const auto& fam : z.petals) smallest = std::min(smallest, fam.size());
  if (smallest == 0) return;
  const std::size_t cap = 2 * smallest - 1;
  for (auto& fam : z.petals)
    if (fam.size() > cap) fam = fam.prefix(cap);
}

struct CoreFamily {
  ElementSet core;
  SetFamily family;
};

struct LevelStat {
  int r = 0;
  std::size_t cores = 0;
  std::size_t extracted = 0;
  double threshold = 0;
};

struct CoresResult {
  int r0 = 0;
  std::shared_ptr<const Split> split;
  /// Lexicographic by core; the families partition f_hat.
  std::vector<CoreFamily> cores;
  SetFamily f_hat;
  std::size_t input_size = 0;
  std::vector<LevelStat> levels;
};

/**
 * Peels dense links off F, level by level from r = m down to 0.
 *
 * At level r, every r-set C on the split whose link in the residual family
 * reaches f(r) is extracted in lexicographic order (T_C = residual[C]). The
 * search stops at the first level whose extractions total at least
 * 3^(r-m-1) |F|, returning that level's cores and T_C. Extractions at higher
 * levels stay removed from the residual, which gives |f_hat[U]| < f(|U|) for
 * every U with |U| > r0. The level totals above r0 sum to less than |F|/2,
 * so level 0 always returns when f(0) <= |F|/2.
 */
inline CoresResult find_cores(const SetFamily& family, std::shared_ptr<const Split> split, const PipelineConfig& cfg) {
  const int m = family.m();
  const std::size_t total = family.size();
  if (!split) throw std::invalid_argument("find_cores needs a split");
  if (total == 0) throw std::invalid_argument("find_cores needs a nonempty family");
  if (split->rank() != m || split->n() != family.n())
    throw std::invalid_argument("split must have m strips over the family's ground set");
  for (const auto& u : family)
    if (!split->transversal(u)) throw std::invalid_argument("member " + u.to_string() + " is not on the split");

  std::vector<bool> alive(total, true);
  CoresResult out{0, split, {}, SetFamily(family.ground(), m), total, {}};
  for (int r = m; r >= 0; --r) {
    const double threshold = cfg.f(r, total);
    std::map<ElementSet, std::vector<std::size_t>> holders;
    for (std::size_t i = 0; i < total; ++i) {
      if (!alive[i]) continue;
      for_each_combination(family[i], r, [&](const ElementSet& c) { holders[c].push_back(i); });
    }
    std::vector<CoreFamily> level;
    std::size_t extracted = 0;
    for (const auto& [core, idx] : holders) {
      std::size_t live = 0;
      for (std::size_t i : idx) live += alive[i] ? 1 : 0;
      if (static_cast<double>(live) < threshold || live == 0) continue;
      std::vector<ElementSet> members;
      for (std::size_t i : idx)
        if (alive[i]) {
          members.push_back(family[i]);
          alive[i] = false;
        }
      extracted += members.size();
      level.push_back({core, SetFamily::from_sorted(family.ground(), m, std::move(members))});
    }
    out.levels.push_back({r, level.size(), extracted, threshold});
    // extracted >= 3^(r-m-1) * total
    if (extracted > 0 && BigInt{extracted} * power(BigInt{3}, m - r + 1) >= BigInt{total}) {
      out.r0 = r;
      std::vector<ElementSet> hat;
      for (const auto& cf : level) hat.insert(hat.end(), cf.family.begin(), cf.family.end());
      std::sort(hat.begin(), hat.end());
      out.f_hat = SetFamily::from_sorted(family.ground(), m, std::move(hat));
      out.cores = std::move(level);
      return out;
    }
  }
  std::size_t residual = static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
  throw ConfigError("find_cores found no level: f(0)=" + std::to_string(cfg.f(0, total)) + " exceeds the residual family of " +
                    std::to_string(residual) + " sets; lower f_theta");
}

/// The rank-r0 PSF with one element (C, {}; T_C, ..., {}; T_C) per core,
/// each on the strips its core touches.
inline Psf base_psf(const CoresResult& cores, int k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  Psf zz;
  zz.rank = cores.r0;
  for (const auto& cf : cores.cores) {
    PartialSunflower z{cf.core, Subsplit::touched_by(cores.split, cf.core), std::nullopt,
                       std::vector<ElementSet>(static_cast<std::size_t>(k)),
                       std::vector<SetFamily>(static_cast<std::size_t>(k), cf.family)};
    zz.elements.push_back(std::move(z));
  }
  return zz;
}

}  // namespace sunflower
