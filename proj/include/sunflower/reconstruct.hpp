#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sunflower/psf.hpp"

namespace sunflower {

struct ReconstructStats {
  int rank = 0;
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::size_t groups_considered = 0;
  std::size_t groups_discarded = 0;
  std::size_t elements_in = 0;
  std::size_t elements_out = 0;
  std::size_t elements_dropped = 0;
  std::size_t sets_filtered = 0;
  /// |F(Z')| / |F(Z)| against eps/2.
  double size_ratio = 0;
  double size_target = 0;
  bool size_target_met = false;
  /// Largest |F_i[{x}]| * b / |F_i| over output petals and x in the new strip;
  /// below 1 means every petal family meets the singleton Gamma(b) bound.
  double max_singleton_ratio = 0;
  bool singleton_target_met = true;
};

struct ReconstructResult {
  Psf psf;
  ReconstructStats stats;
};

namespace detail {

/// Strip index of target that sub lacks.
inline int new_strip(const Subsplit& sub, const Subsplit& target) {
  for (int j : target.indices())
    if (!sub.has_strip(j)) return j;
  throw std::invalid_argument("target subsplit adds no strip");
}

}  // namespace detail

/**
 * Regroups a rank-r PSF by the (r+1)-subsplits X' containing each element's
 * subsplit, visiting X' in lexicographic order of strip indices.
 *
 * For each X' whose still-unclaimed elements carry at least group_floor of
 * |F(Z)|, those elements are claimed and, petal by petal, the members whose
 * (r+1)-trace U on X' is heavy relative to their r-trace B on the old strips
 * (|F_i[U]| > ratio^-(r+1) |F_i[B]|) are removed. An element is dropped when
 * some petal keeps less than eps of its size; survivors are normalized and
 * tagged with X' as their target. Unclaimed elements are discarded.
 */
inline ReconstructResult reconstruct(const Psf& zz, const PipelineConfig& cfg) {
  if (zz.elements.empty()) throw std::invalid_argument("reconstruct needs a nonempty PSF");
  const auto& split = zz.elements.front().subsplit.parent();
  const int m = split->rank();
  const int r = zz.rank;
  if (r >= m) throw std::invalid_argument("reconstruct needs rank below m");
  const int family_m = zz.elements.front().petals.front().m();
  PsfValidation check = validate_psf(zz, family_m, cfg);
  if (!check.ok()) throw std::invalid_argument("reconstruct input is not a valid PSF: " + check.failed()->name + ": " + check.failed()->counterexample);

  ReconstructResult out;
  out.psf.rank = r;
  ReconstructStats& st = out.stats;
  st.rank = r;
  st.elements_in = zz.elements.size();
  st.input_size = union_size(zz);

  std::map<std::vector<int>, std::vector<std::size_t>> by_subsplit;
  for (std::size_t e = 0; e < zz.elements.size(); ++e) by_subsplit[zz.elements[e].subsplit.indices()].push_back(e);

  std::set<std::vector<int>> targets;
  for (const auto& [idx, _] : by_subsplit)
    for (int j = 0; j < m; ++j)
      if (!std::binary_search(idx.begin(), idx.end(), j)) {
        std::vector<int> t = idx;
        t.insert(std::upper_bound(t.begin(), t.end(), j), j);
        targets.insert(std::move(t));
      }

  const double floor = cfg.group_floor_for(m) * static_cast<double>(st.input_size);
  const long double scale = std::pow(static_cast<long double>(cfg.reconstruct_ratio), r + 1);

  for (const auto& target_idx : targets) {
    const Subsplit target(split, target_idx);
    std::vector<std::vector<int>> claimed;
    Psf group;
    for (const auto& [idx, members] : by_subsplit) {
      if (!std::includes(target_idx.begin(), target_idx.end(), idx.begin(), idx.end())) continue;
      claimed.push_back(idx);
      for (std::size_t e : members) group.elements.push_back(zz.elements[e]);
    }
    if (claimed.empty()) continue;
    ++st.groups_considered;
    if (static_cast<double>(union_size(group)) < floor) {
      ++st.groups_discarded;
      continue;
    }
    for (const auto& idx : claimed) by_subsplit.erase(idx);

    for (PartialSunflower& z : group.elements) {
      const ElementSet old_union = z.subsplit.union_set();
      const ElementSet new_union = target.union_set();
      bool drop = false;
      std::vector<SetFamily> filtered;
      for (const SetFamily& fam : z.petals) {
        std::unordered_map<ElementSet, std::size_t, ElementSetHash> b_count, u_count;
        for (const auto& u : fam) {
          ++b_count[u & old_union];
          ++u_count[u & new_union];
        }
        SetFamily kept = fam.filter([&](const ElementSet& u) {
          return !(static_cast<long double>(u_count[u & new_union]) * scale > static_cast<long double>(b_count[u & old_union]));
        });
        st.sets_filtered += fam.size() - kept.size();
        if (static_cast<double>(kept.size()) < cfg.eps * static_cast<double>(fam.size())) drop = true;
        filtered.push_back(std::move(kept));
      }
      if (drop) {
        ++st.elements_dropped;
        continue;
      }
      PartialSunflower next = z;
      next.petals = std::move(filtered);
      next.target = target;
      normalize(next);
      out.psf.elements.push_back(std::move(next));
    }
  }
  for (const auto& [idx, members] : by_subsplit) st.elements_dropped += members.size();

  st.elements_out = out.psf.elements.size();
  st.output_size = union_size(out.psf);
  st.size_ratio = st.input_size ? static_cast<double>(st.output_size) / static_cast<double>(st.input_size) : 0.0;
  st.size_target = cfg.eps / 2;
  st.size_target_met = st.size_ratio > st.size_target;
  for (const auto& z : out.psf.elements) {
    const ElementSet& strip = split->strip(detail::new_strip(z.subsplit, *z.target));
    for (const auto& fam : z.petals) {
      std::unordered_map<int, std::size_t> per_element;
      for (const auto& u : fam) (u & strip).for_each([&](int x) { ++per_element[x]; });
      for (const auto& [x, count] : per_element) {
        double ratio = static_cast<double>(count) * cfg.b / static_cast<double>(fam.size());
        st.max_singleton_ratio = std::max(st.max_singleton_ratio, ratio);
      }
    }
  }
  st.singleton_target_met = st.max_singleton_ratio < 1.0;
  if (cfg.assert_bounds && !(st.size_target_met && st.singleton_target_met))
    throw BoundViolation("reconstruct at rank " + std::to_string(r) + ": size ratio " + std::to_string(st.size_ratio) +
                         " (target > " + std::to_string(st.size_target) + "), singleton ratio " +
                         std::to_string(st.max_singleton_ratio) + " (target < 1)");
  return out;
}

}  // namespace sunflower
