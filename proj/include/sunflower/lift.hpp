#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sunflower/extension.hpp"
#include "sunflower/psf.hpp"
#include "sunflower/random.hpp"
#include "sunflower/reconstruct.hpp"

namespace sunflower {

struct LiftDiagnostic {
  std::size_t element = 0;
  int round = 0;
  std::string reason;
};

struct LiftStats {
  int rank = 0;
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::size_t elements_in = 0;
  std::size_t elements_skipped = 0;
  std::size_t produced = 0;
  int seed_size = 0;
  int extended_size = 0;
  /// Smallest |Y_i| / C(|strip|, d) seen in a first round, against 1 - exp(-h).
  double min_seed_density = 1;
  double seed_density_target = 0;
  /// First-round consumed fraction |F_i^Y| / |F_i| range, against the
  /// window (sqrt(eps)/2, 2 sqrt(eps)).
  double min_consumed = 1;
  double max_consumed = 0;
  bool seed_density_met = true;
  bool consumed_window_met = true;
};

struct LiftResult {
  Psf psf;
  LiftStats stats;
  std::vector<LiftDiagnostic> diagnostics;
};

namespace detail {

/// Positions of `global` inside the sorted strip element list.
inline ElementSet to_local(const ElementSet& global, const std::vector<int>& strip_elements) {
  ElementSet local;
  global.for_each([&](int e) {
    auto it = std::lower_bound(strip_elements.begin(), strip_elements.end(), e);
    local.insert(static_cast<int>(it - strip_elements.begin()));
  });
  return local;
}

inline ElementSet to_global(const ElementSet& local, const std::vector<int>& strip_elements) {
  ElementSet global;
  local.for_each([&](int i) { global.insert(strip_elements[static_cast<std::size_t>(i)]); });
  return global;
}

/// k pairwise-disjoint picks, one from each candidate list, in lexicographic
/// order of the choice vector.
class TupleSearch {
 public:
  TupleSearch(const std::vector<std::vector<ElementSet>>& options, std::uint64_t budget) : options_(options), budget_(budget) {}

  std::optional<std::vector<ElementSet>> find() {
    picked_.clear();
    nodes_ = 0;
    if (dfs(0, ElementSet{})) return picked_;
    return std::nullopt;
  }

  bool exhausted() const { return nodes_ > budget_; }

 private:
  bool dfs(std::size_t i, const ElementSet& used) {
    if (i == options_.size()) return true;
    for (const auto& y : options_[i]) {
      if (++nodes_ > budget_) return false;
      if (y.intersects(used)) continue;
      picked_.push_back(y);
      if (dfs(i + 1, used | y)) return true;
      picked_.pop_back();
      if (nodes_ > budget_) return false;
    }
    return false;
  }

  const std::vector<std::vector<ElementSet>>& options_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<ElementSet> picked_;
};

}  // namespace detail

/**
 * Grows every element of a reconstructed PSF by its target strip X.
 *
 * Per element and round: for each petal family F_i, the seed family Y_i
 * collects the d-subsets Y of X (d = floor(delta |X|)) for which F_i^Y, the
 * members whose nonempty trace on X lies in Y, has size strictly inside
 * d/|X| (1 - slack_low, 1 + slack_high) |F_i|. Each Y_i is extended to
 * d'-sets (d' = floor(2 delta ln k |X|), capped at |X|/k) by repeated
 * doubling; k pairwise-disjoint extended sets are chosen, each shrunk back to
 * a member of its Y_i, and the element (C, Y_i + Y'_i; F_i^Y'_i) is emitted.
 * The consumed members leave every F_i and the round repeats, up to
 * lift_rounds times or until a petal family empties or no tuple exists.
 * Emitted elements are normalized.
 */
inline LiftResult lift_rank(const Psf& zz, const PipelineConfig& cfg, std::uint64_t seed) {
  LiftResult out;
  out.psf.rank = zz.rank + 1;
  LiftStats& st = out.stats;
  st.rank = zz.rank;
  st.elements_in = zz.elements.size();
  st.input_size = union_size(zz);
  st.seed_density_target = 1.0 - std::exp(-cfg.h);
  const double root_eps = std::sqrt(cfg.eps);
  const std::size_t k = static_cast<std::size_t>(cfg.k);
  Rng master(seed);

  for (std::size_t e = 0; e < zz.elements.size(); ++e) {
    const PartialSunflower& z = zz.elements[e];
    if (!z.target) throw std::invalid_argument("lift_rank needs reconstructed elements (element " + std::to_string(e) + " has no target)");
    if (z.petals.size() != k) throw std::invalid_argument("element " + std::to_string(e) + " does not carry k petal families");
    const auto& split = z.subsplit.parent();
    const ElementSet strip = split->strip(detail::new_strip(z.subsplit, *z.target));
    const std::vector<int> strip_elements = strip.indices();
    const int width = static_cast<int>(strip_elements.size());
    const int d = seed_size(cfg.delta, width);
    const int d_ext = std::max(d, std::min(seed_size(cfg.delta_prime(), width), width / cfg.k));
    st.seed_size = d;
    st.extended_size = d_ext;
    if (d < 1 || static_cast<int>(k) * d > width) {
      ++st.elements_skipped;
      out.diagnostics.push_back({e, 0, "seed size " + std::to_string(d) + " unusable on a strip of " + std::to_string(width)});
      continue;
    }
    const GroundSet local_ground(width);
    const double share = static_cast<double>(d) / width;
    const bool enumerate = binomial(width, d) <= cfg.lift_enum_cap;
    Rng rng = master.split(e);

    std::vector<SetFamily> working = z.petals;
    std::size_t emitted = 0;
    for (int round = 0; round < cfg.lift_rounds; ++round) {
      // Candidate seed sets, shared by all petals this round.
      std::vector<ElementSet> candidates;
      if (enumerate) {
        for_each_combination(local_ground.all(), d, [&](const ElementSet& y) { candidates.push_back(y); });
      } else {
        std::set<ElementSet> drawn;
        for (std::uint64_t t = 0; t < cfg.lift_samples; ++t) drawn.insert(rng.sample_subset(local_ground.all(), d));
        candidates.assign(drawn.begin(), drawn.end());
      }

      std::vector<SetFamily> seed_families;
      std::vector<std::vector<ElementSet>> traces(k);
      bool missing = false;
      for (std::size_t i = 0; i < k && !missing; ++i) {
        for (const auto& u : working[i]) traces[i].push_back(detail::to_local(u & strip, strip_elements));
        const double size = static_cast<double>(working[i].size());
        const double lo = share * (1.0 - cfg.slack_low) * size;
        const double hi = share * (1.0 + cfg.slack_high) * size;
        std::vector<ElementSet> good;
        for (const auto& y : candidates) {
          std::size_t hits = 0;
          for (const auto& t : traces[i])
            if (!t.empty() && t.is_subset_of(y)) ++hits;
          const double v = static_cast<double>(hits);
          if (hits > 0 && lo < v && v < hi) good.push_back(y);
        }
        if (good.empty()) {
          missing = true;
          out.diagnostics.push_back({e, round, "petal " + std::to_string(i + 1) + " has no seed set inside the window"});
          break;
        }
        if (round == 0)
          st.min_seed_density = std::min(st.min_seed_density, static_cast<double>(good.size()) / to_double(binomial(width, d)));
        seed_families.push_back(SetFamily::from_sorted(local_ground, d, std::move(good)));
      }
      if (missing) break;

      std::vector<std::vector<ElementSet>> extended;
      for (const auto& fam : seed_families) extended.push_back(iterated_extend(fam, d_ext).result.family.sets());
      detail::TupleSearch search(extended, cfg.tuple_budget);
      auto tuple = search.find();
      if (!tuple) {
        out.diagnostics.push_back({e, round, search.exhausted() ? "tuple search budget exhausted" : "no disjoint extended seed tuple"});
        break;
      }

      PartialSunflower next{z.core, *z.target, std::nullopt, z.seeds, {}};
      ElementSet consumed_any;
      std::vector<SetFamily> produced;
      for (std::size_t i = 0; i < k; ++i) {
        const ElementSet& wide = (*tuple)[i];
        auto it = std::find_if(seed_families[i].begin(), seed_families[i].end(), [&](const ElementSet& y) { return y.is_subset_of(wide); });
        const ElementSet chosen = *it;
        next.seeds[i] |= detail::to_global(chosen, strip_elements);
        std::size_t pos = 0;
        SetFamily petal = working[i].filter([&](const ElementSet&) {
          const ElementSet& t = traces[i][pos++];
          return !t.empty() && t.is_subset_of(chosen);
        });
        if (round == 0) {
          double frac = static_cast<double>(petal.size()) / static_cast<double>(working[i].size());
          st.min_consumed = std::min(st.min_consumed, frac);
          st.max_consumed = std::max(st.max_consumed, frac);
        }
        produced.push_back(std::move(petal));
      }
      std::vector<ElementSet> used;
      for (const auto& fam : produced) used.insert(used.end(), fam.begin(), fam.end());
      std::sort(used.begin(), used.end());
      const SetFamily used_family = SetFamily::from_sorted(working[0].ground(), working[0].m(), used);
      next.petals = std::move(produced);
      normalize(next);
      out.psf.elements.push_back(std::move(next));
      ++emitted;

      bool exhausted = false;
      for (auto& fam : working) {
        fam = fam.minus(used_family);
        exhausted = exhausted || fam.empty();
      }
      if (exhausted) break;
    }
    if (emitted == 0) ++st.elements_skipped;
    st.produced += emitted;
  }

  st.output_size = union_size(out.psf);
  st.seed_density_met = st.min_seed_density > st.seed_density_target;
  st.consumed_window_met = st.produced == 0 || (st.min_consumed > root_eps / 2 && st.max_consumed < 2 * root_eps);
  if (cfg.assert_bounds && !(st.seed_density_met && st.consumed_window_met))
    throw BoundViolation("lift at rank " + std::to_string(zz.rank) + ": seed density " + std::to_string(st.min_seed_density) +
                         " (target > " + std::to_string(st.seed_density_target) + "), consumed fraction range [" +
                         std::to_string(st.min_consumed) + ", " + std::to_string(st.max_consumed) + "]");
  return out;
}

}  // namespace sunflower
