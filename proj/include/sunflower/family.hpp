#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sunflower/element_set.hpp"
#include "sunflower/numeric.hpp"

namespace sunflower {

struct GroundSet {
  int n = 1;

  explicit GroundSet(int size) : n(size) {
    if (n < 1 || n > kMaxElements)
      throw std::invalid_argument("ground set size " + std::to_string(n) + " outside 1.." + std::to_string(kMaxElements));
  }

  ElementSet all() const { return ElementSet::prefix(n); }
  bool contains(const ElementSet& s) const { return s.span() <= n; }
};

/**
 * An m-uniform family of distinct subsets of {0..n-1}, optionally weighted.
 *
 * Members are kept in lexicographic order; weights (when present) are exact
 * nonnegative rationals parallel to the members. Sets outside the family
 * implicitly weigh zero.
 */
class SetFamily {
 public:
  SetFamily(GroundSet ground, int m, std::vector<ElementSet> sets = {},
            std::optional<std::vector<Rational>> weights = std::nullopt)
      : ground_(ground), m_(m), sets_(std::move(sets)), weights_(std::move(weights)) {
    if (m_ < 0 || m_ > ground_.n)
      throw std::invalid_argument("uniform size m=" + std::to_string(m_) + " outside 0..n");
    if (weights_ && weights_->size() != sets_.size())
      throw std::invalid_argument("weights list has " + std::to_string(weights_->size()) + " entries for " +
                                  std::to_string(sets_.size()) + " sets");
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      if (!ground_.contains(sets_[i]))
        throw std::invalid_argument("set " + sets_[i].to_string() + " leaves the ground set 1.." + std::to_string(ground_.n));
      if (sets_[i].size() != m_)
        throw std::invalid_argument("set " + sets_[i].to_string() + " has cardinality " +
                                    std::to_string(sets_[i].size()) + ", expected " + std::to_string(m_));
      if (weights_ && (*weights_)[i] < 0)
        throw std::invalid_argument("negative weight for set " + sets_[i].to_string());
    }
    canonicalize();
    for (std::size_t i = 1; i < sets_.size(); ++i)
      if (sets_[i] == sets_[i - 1]) throw std::invalid_argument("duplicate set " + sets_[i].to_string());
  }

  /// Every m-subset of the ground set.
  static SetFamily complete(GroundSet ground, int m) {
    std::vector<ElementSet> sets;
    for_each_combination(ground.all(), m, [&](const ElementSet& s) { sets.push_back(s); });
    return from_sorted(ground, m, std::move(sets));
  }

  /// Trusted constructor for members already sorted, distinct, and valid.
  static SetFamily from_sorted(GroundSet ground, int m, std::vector<ElementSet> sets,
                               std::optional<std::vector<Rational>> weights = std::nullopt) {
    SetFamily f(ground, m);
    f.sets_ = std::move(sets);
    f.weights_ = std::move(weights);
    return f;
  }

  GroundSet ground() const { return ground_; }
  int n() const { return ground_.n; }
  int m() const { return m_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  bool weighted() const { return weights_.has_value(); }

  const std::vector<ElementSet>& sets() const { return sets_; }
  const ElementSet& operator[](std::size_t i) const { return sets_[i]; }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  const std::optional<std::vector<Rational>>& weights() const { return weights_; }

  Rational weight_at(std::size_t i) const { return weights_ ? (*weights_)[i] : Rational{1}; }

  std::optional<std::size_t> find(const ElementSet& s) const {
    auto it = std::lower_bound(sets_.begin(), sets_.end(), s);
    if (it == sets_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - sets_.begin());
  }

  bool contains(const ElementSet& s) const { return find(s).has_value(); }

  /// w(s), zero outside the family.
  Rational weight(const ElementSet& s) const {
    auto i = find(s);
    return i ? weight_at(*i) : Rational{0};
  }

  Rational total_weight() const {
    if (!weights_) return Rational{static_cast<long long>(sets_.size())};
    Rational total = 0;
    for (const auto& w : *weights_) total += w;
    return total;
  }

  /// Members satisfying pred, order and weights preserved.
  template <typename Pred>
  SetFamily filter(Pred&& pred) const {
    std::vector<ElementSet> kept;
    std::optional<std::vector<Rational>> kept_weights;
    if (weights_) kept_weights.emplace();
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      if (!pred(sets_[i])) continue;
      kept.push_back(sets_[i]);
      if (weights_) kept_weights->push_back((*weights_)[i]);
    }
    return from_sorted(ground_, m_, std::move(kept), std::move(kept_weights));
  }

  /// Members not in other.
  SetFamily minus(const SetFamily& other) const {
    return filter([&](const ElementSet& s) { return !other.contains(s); });
  }

  /// The first count members in lexicographic order.
  SetFamily prefix(std::size_t count) const {
    count = std::min(count, sets_.size());
    std::vector<ElementSet> kept(sets_.begin(), sets_.begin() + static_cast<std::ptrdiff_t>(count));
    std::optional<std::vector<Rational>> kept_weights;
    if (weights_) kept_weights.emplace(weights_->begin(), weights_->begin() + static_cast<std::ptrdiff_t>(count));
    return from_sorted(ground_, m_, std::move(kept), std::move(kept_weights));
  }

  SetFamily unweighted() const { return from_sorted(ground_, m_, sets_); }

  /// Same members over a larger ground set.
  SetFamily with_ground(GroundSet larger) const {
    if (larger.n < ground_.n) throw std::invalid_argument("cannot shrink the ground set of a family");
    return from_sorted(larger, m_, sets_, weights_);
  }

  friend bool operator==(const SetFamily& a, const SetFamily& b) {
    return a.ground_.n == b.ground_.n && a.m_ == b.m_ && a.sets_ == b.sets_ && a.weights_ == b.weights_;
  }

 private:
  void canonicalize() {
    if (std::is_sorted(sets_.begin(), sets_.end())) return;
    if (!weights_) {
      std::sort(sets_.begin(), sets_.end());
      return;
    }
    std::vector<std::size_t> order(sets_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sets_[a] < sets_[b]; });
    std::vector<ElementSet> sorted_sets;
    std::vector<Rational> sorted_weights;
    for (std::size_t i : order) {
      sorted_sets.push_back(sets_[i]);
      sorted_weights.push_back((*weights_)[i]);
    }
    sets_ = std::move(sorted_sets);
    weights_ = std::move(sorted_weights);
  }

  GroundSet ground_;
  int m_;
  std::vector<ElementSet> sets_;
  std::optional<std::vector<Rational>> weights_;
};

/// F[S]: members containing S.
inline SetFamily link(const SetFamily& family, const ElementSet& core) {
  return family.filter([&](const ElementSet& u) { return core.is_subset_of(u); });
}

/// ||G|| = sum of w(U) over the distinct U in G that belong to the family.
template <typename Range>
Rational norm(const SetFamily& family, const Range& sets) {
  std::vector<ElementSet> distinct(std::begin(sets), std::end(sets));
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Rational total = 0;
  for (const ElementSet& s : distinct) total += family.weight(s);
  return total;
}

inline Rational norm(const SetFamily& family) { return family.total_weight(); }

struct GammaReport {
  bool holds = true;
  std::optional<ElementSet> witness;
  /// ||F[S]|| * b^|S| / ||F|| for the witness (holds iff every such ratio is < 1);
  /// the largest ratio over all S when the condition holds.
  double ratio = 0.0;
};

/**
 * Checks ||F[S]|| < b^{-|S|} ||F|| for every nonempty S.
 *
 * Only subsets of members can have a nonzero link, so those are the only
 * candidates examined. The comparison is exact: b is taken as the exact
 * rational value of the double.
 */
inline GammaReport gamma_check(const SetFamily& family, double b) {
  if (!(b > 0) || !std::isfinite(b)) throw std::invalid_argument("gamma_check needs a finite b > 0");
  const Rational total = norm(family);
  if (total == 0) throw std::domain_error("gamma condition undefined for a family of zero norm");

  std::unordered_map<ElementSet, Rational, ElementSetHash> link_norm;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Rational w = family.weight_at(i);
    for_each_nonempty_subset(family[i], [&](const ElementSet& s) { link_norm[s] += w; });
  }

  const Rational base = exact_rational(b);
  std::vector<Rational> base_power{Rational{1}};
  auto power_of = [&](int e) -> const Rational& {
    while (static_cast<int>(base_power.size()) <= e) base_power.push_back(base_power.back() * base);
    return base_power[static_cast<std::size_t>(e)];
  };

  GammaReport report;
  Rational worst = -1;
  for (const auto& [s, value] : link_norm) {
    Rational scaled = value * power_of(s.size());
    if (scaled >= total) {
      if (!report.witness || s < *report.witness) {
        report.witness = s;
        report.ratio = to_double(scaled / total);
      }
    }
    if (scaled > worst) worst = scaled;
  }
  report.holds = !report.witness.has_value();
  if (report.holds) report.ratio = link_norm.empty() ? 0.0 : to_double(worst / total);
  return report;
}

/// ln(total / count) with +inf for count = 0; exactly 0 when count = total.
inline double log_ratio(const BigInt& total, const BigInt& count) {
  if (count == 0) return kInfinity;
  if (total == count) return 0.0;
  double q = to_double(Rational{total, count});
  if (std::isfinite(q) && q > 0) return std::log(q);
  return log_big(total) - log_big(count);
}

/// kappa(F) = ln C(n, m) - ln |F|; +inf for the empty family.
inline double sparsity(const SetFamily& family) {
  return log_ratio(binomial(family.n(), family.m()), BigInt{family.size()});
}

}  // namespace sunflower
