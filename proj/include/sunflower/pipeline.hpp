#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sunflower/lift.hpp"
#include "sunflower/psf.hpp"
#include "sunflower/reconstruct.hpp"
#include "sunflower/split.hpp"
#include "sunflower/sunflowers.hpp"

namespace sunflower {

struct PipelineOptions {
  /// Reconstruct + lift rounds before giving up.
  int max_rounds = 16;
  /// Use this split instead of searching for a dense one.
  std::optional<Split> split;
  std::uint64_t split_tries = 2000;
};

/// One line of the run trace.
struct TraceEntry {
  std::string stage;
  int rank = 0;
  std::size_t size = 0;
  bool valid = true;
  std::optional<bool> normal;
  std::string detail;
};

struct PipelineReport {
  bool reached_rank_m = false;
  int final_rank = 0;
  int m = 0;
  int padded_n = 0;
  int r0 = 0;
  std::size_t input_size = 0;
  std::size_t on_split = 0;
  std::size_t f_hat_size = 0;
  std::optional<Split> split;
  std::vector<TraceEntry> trace;
  std::vector<ReconstructStats> reconstructs;
  std::vector<LiftStats> lifts;
  std::vector<LiftDiagnostic> diagnostics;
  std::optional<SunflowerCertificate> certificate;
  /// Empty on success; otherwise why the run stopped.
  std::string failure;
};

/// F over a ground set padded with unused elements up to a multiple of m.
inline SetFamily pad_to_multiple(const SetFamily& family) {
  const int m = family.m();
  if (m < 1) throw std::invalid_argument("padding needs m >= 1");
  const int padded = (family.n() + m - 1) / m * m;
  if (padded == family.n()) return family;
  if (padded > kMaxElements) throw std::invalid_argument("padding n to a multiple of m exceeds the element limit");
  return family.with_ground(GroundSet(padded));
}

namespace detail {

inline TraceEntry trace_psf(const std::string& stage, const Psf& zz, const SetFamily& f_hat, const PipelineConfig& cfg, int r0,
                            std::string extra = {}) {
  PsfValidation v = validate_psf(zz, f_hat, cfg, r0);
  TraceEntry t{stage, zz.rank, v.size, v.ok(), v.normal, std::move(extra)};
  if (const ConditionResult* bad = v.failed()) t.detail = bad->name + ": " + bad->counterexample;
  return t;
}

}  // namespace detail

/**
 * Dense split, cores, base PSF, then reconstruct and lift until rank m.
 *
 * n is padded to a multiple of m with unused elements. At rank m any element
 * whose free strips are nonempty yields a certificate: one member from each
 * petal family, checked with is_sunflower. ConfigError from find_cores
 * propagates; every other stop is reported with the rank reached.
 */
inline PipelineReport run_pipeline(const SetFamily& input, const PipelineConfig& cfg, std::uint64_t seed, const PipelineOptions& opts = {}) {
  cfg.validate();
  PipelineReport rep;
  const int m = input.m();
  rep.m = m;
  rep.input_size = input.size();
  if (m < 1) throw std::invalid_argument("pipeline needs m >= 1");
  if (input.empty()) throw std::invalid_argument("pipeline needs a nonempty family");

  const SetFamily family = pad_to_multiple(input).unweighted();
  const int padded = family.n();
  rep.padded_n = padded;
  Rng master(seed);

  std::shared_ptr<const Split> split;
  if (opts.split) {
    if (opts.split->n() != padded || opts.split->rank() != m)
      throw std::invalid_argument("supplied split must have " + std::to_string(m) + " strips over " + std::to_string(padded) + " elements");
    split = std::make_shared<const Split>(*opts.split);
  } else {
    try {
      split = std::make_shared<const Split>(find_dense_split(family, master.split(1).next(), opts.split_tries).split);
    } catch (const SplitSearchFailed& e) {
      if (!e.best_split) throw;
      split = std::make_shared<const Split>(*e.best_split);
    }
  }
  rep.split = *split;
  const SetFamily on_split = family.filter([&](const ElementSet& u) { return split->transversal(u); });
  rep.on_split = on_split.size();
  rep.trace.push_back({"split", 0, on_split.size(), true, std::nullopt, std::to_string(on_split.size()) + " of " + std::to_string(family.size()) + " members on the split"});
  if (on_split.empty()) {
    rep.failure = "no member lies on the split";
    return rep;
  }

  const CoresResult cores = find_cores(on_split, split, cfg);
  rep.r0 = cores.r0;
  rep.f_hat_size = cores.f_hat.size();
  rep.trace.push_back({"find-cores", cores.r0, cores.f_hat.size(), true, std::nullopt, std::to_string(cores.cores.size()) + " cores"});

  Psf zz = base_psf(cores, cfg.k);
  rep.final_rank = zz.rank;
  rep.trace.push_back(detail::trace_psf("base", zz, cores.f_hat, cfg, cores.r0));
  if (!rep.trace.back().valid) {
    rep.failure = "base PSF invalid: " + rep.trace.back().detail;
    return rep;
  }
  if (cores.r0 == m && zz.elements.size() > 0) {
    // Every core is a full member: no free strip is left to hold petals.
    rep.failure = "cores saturate the split at r0 = m";
    return rep;
  }

  for (int round = 0; round < opts.max_rounds && zz.rank < m; ++round) {
    ReconstructResult rec = reconstruct(zz, cfg);
    rep.reconstructs.push_back(rec.stats);
    rep.trace.push_back(detail::trace_psf("reconstruct", rec.psf, cores.f_hat, cfg, cores.r0));
    if (!rep.trace.back().valid) {
      rep.failure = "reconstruct produced an invalid PSF: " + rep.trace.back().detail;
      return rep;
    }
    if (rec.psf.empty()) {
      rep.failure = "reconstruct left no element at rank " + std::to_string(zz.rank);
      return rep;
    }
    LiftResult lift = lift_rank(rec.psf, cfg, master.split(100 + static_cast<std::uint64_t>(round)).next());
    rep.lifts.push_back(lift.stats);
    rep.diagnostics.insert(rep.diagnostics.end(), lift.diagnostics.begin(), lift.diagnostics.end());
    rep.trace.push_back(detail::trace_psf("lift", lift.psf, cores.f_hat, cfg, cores.r0,
                                          std::to_string(lift.stats.produced) + " elements, " + std::to_string(lift.stats.elements_skipped) + " skipped"));
    if (!rep.trace.back().valid) {
      rep.failure = "lift produced an invalid PSF: " + rep.trace.back().detail;
      return rep;
    }
    if (lift.psf.empty()) {
      rep.failure = "lift produced no element at rank " + std::to_string(zz.rank + 1);
      return rep;
    }
    zz = std::move(lift.psf);
    rep.final_rank = zz.rank;
  }
  if (zz.rank < m) {
    rep.failure = "round cap reached at rank " + std::to_string(zz.rank);
    return rep;
  }

  rep.reached_rank_m = true;
  for (const auto& z : zz.elements) {
    if (subsplit_minus_set(z.subsplit, z.core).rank() == 0) continue;
    std::vector<ElementSet> picks;
    for (const auto& fam : z.petals) picks.push_back(fam[0]);
    auto core = is_sunflower(picks);
    if (!core || !(*core == z.core)) {
      rep.failure = "rank-m element does not yield a sunflower with its core";
      return rep;
    }
    rep.certificate = SunflowerCertificate{std::move(picks), *core};
    break;
  }
  if (!rep.certificate) rep.failure = "no rank-m element has a free strip";
  rep.trace.push_back({"certificate", zz.rank, union_size(zz), rep.certificate.has_value(), std::nullopt,
                       rep.certificate ? "core " + rep.certificate->core.to_string() : rep.failure});
  return rep;
}

}  // namespace sunflower
