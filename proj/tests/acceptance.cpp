// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sunflower.hpp"

using namespace sunflower;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  Json report = Json::object();
};

Json labels(const ElementSet& s) { return Json(s.labels()); }

// 1. gamma_check against the all-subsets oracle
Outcome gamma_agreement() {
  Outcome out;
  Rng rng(1001);
  const double bs[] = {0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 8.0};
  int agree = 0, trials = 0;
  Json rows = Json::array();
  while (trials < 500) {
    const int n = gen::between(rng, 1, 10);
    const int m = gen::between(rng, 1, std::min(n, 4));
    const bool weighted = rng.below(2) == 1;
    const SetFamily f = gen::random_family(rng, n, m, rng.uniform01(), weighted);
    if (norm(f) == 0) continue;
    const double b = bs[rng.below(std::size(bs))];
    ++trials;
    const GammaReport got = gamma_check(f, b);
    const oracle::GammaAnswer want = oracle::gamma(oracle::convert(f), b);
    const bool same = got.holds == want.holds && (got.holds || (want.witness && *got.witness == oracle::from_mask(*want.witness)));
    agree += same ? 1 : 0;
    rows.push_back({got.holds, got.witness ? labels(*got.witness) : Json(nullptr)});
  }
  out.pass = agree == trials;
  out.detail = std::to_string(agree) + "/" + std::to_string(trials) + " agree";
  out.report = {{"agree", agree}, {"trials", trials}, {"answers", rows}};
  return out;
}

// 2. sparsity never increases under extension
Outcome kappa_sweep() {
  Outcome out;
  Rng rng(1002);
  int violations = 0, checks = 0, families = 0;
  while (families < 1000) {
    const int n = gen::between(rng, 1, 12);
    const int m = gen::between(rng, 1, std::min(n, 4));
    const SetFamily f = gen::random_family(rng, n, m, 0.02 + 0.6 * rng.uniform01());
    if (f.empty()) continue;
    ++families;
    for (int l = m; l <= n; ++l) {
      ++checks;
      if (!check_kappa_monotone(f, l).holds) ++violations;
    }
  }
  out.pass = violations == 0;
  out.detail = std::to_string(families) + " families, " + std::to_string(checks) + " checks, " + std::to_string(violations) + " violations";
  out.report = {{"families", families}, {"checks", checks}, {"violations", violations}};
  return out;
}

// 3. phase-2 inequality
Outcome phase2_sweep() {
  Outcome out;
  int violations = 0;
  std::uint64_t exhaustive = 0, random = 0;
  for (int n = 2; n <= 8; ++n)
    for (int m = 1; m <= 3 && 2 * m <= n; ++m) {
      std::vector<ElementSet> all;
      for_each_combination(ElementSet::prefix(n), m, [&](const ElementSet& s) { all.push_back(s); });
      auto check = [&](const std::vector<ElementSet>& chosen) {
        ++exhaustive;
        if (!check_phase2(SetFamily(GroundSet(n), m, chosen)).holds) ++violations;
      };
      if (all.size() <= 20) {
        for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << all.size()); ++pick) {
          std::vector<ElementSet> chosen;
          for (std::size_t i = 0; i < all.size(); ++i)
            if (pick >> i & 1u) chosen.push_back(all[i]);
          check(chosen);
        }
        continue;
      }
      // Too many subfamilies: every family with at most 3 members, and every
      // family missing at most 3 members.
      const std::size_t size = all.size();
      std::vector<std::size_t> idx;
      auto visit = [&](auto& self, std::size_t from) -> void {
        std::vector<ElementSet> small, large;
        for (std::size_t i = 0, p = 0; i < size; ++i) {
          if (p < idx.size() && idx[p] == i) {
            small.push_back(all[i]);
            ++p;
          } else {
            large.push_back(all[i]);
          }
        }
        check(small);
        check(large);
        if (idx.size() == 3) return;
        for (std::size_t i = from; i < size; ++i) {
          idx.push_back(i);
          self(self, i + 1);
          idx.pop_back();
        }
      };
      visit(visit, 0);
    }
  Rng rng(1003);
  while (random < 500) {
    const int n = gen::between(rng, 2, 10);
    const int m = gen::between(rng, 1, n / 2);
    const SetFamily f = gen::random_family(rng, n, m, rng.uniform01());
    ++random;
    if (!check_phase2(f).holds) ++violations;
  }
  out.pass = violations == 0;
  out.detail = std::to_string(exhaustive) + " exhaustive + " + std::to_string(random) + " random families, " + std::to_string(violations) +
               " violations";
  out.report = {{"exhaustive", exhaustive}, {"random", random}, {"violations", violations}};
  return out;
}

// 4. dense split search and the averaging identity
Outcome split_sweep() {
  Outcome out;
  Rng rng(1004);
  int failures = 0, searches = 0, identities = 0;
  Json retained = Json::array();
  while (searches < 200) {
    const int m = gen::between(rng, 2, 3);
    const int n = m * gen::between(rng, 2, 12 / m);
    const SetFamily f = gen::random_family(rng, n, m, 0.05 + 0.9 * rng.uniform01());
    if (f.empty()) continue;
    ++searches;
    const DenseSplitResult res = find_dense_split(f, rng.next(), 200);
    if (Rational{static_cast<long long>(res.retained)} < res.bound || count_on_split(f, res.split) != res.retained) ++failures;
    retained.push_back(res.retained);
  }
  for (auto [n, m] : {std::pair{4, 2}, {6, 2}, {8, 2}, {6, 3}, {8, 4}})
    for (int t = 0; t < 5; ++t) {
      const SetFamily f = gen::random_family(rng, n, m, 0.2 + 0.7 * rng.uniform01());
      if (f.empty()) continue;
      BigInt total = 0, count = 0;
      for_each_split(n, m, [&](const Split& s) {
        total += count_on_split(f, s);
        ++count;
        return true;
      });
      ++identities;
      if (Rational{total, count} != dense_split_bound(n, m, f.size())) ++failures;
    }
  out.pass = failures == 0;
  out.detail = std::to_string(searches) + " searches, " + std::to_string(identities) + " exact averages, " + std::to_string(failures) +
               " failures";
  out.report = {{"searches", searches}, {"identities", identities}, {"failures", failures}, {"retained", retained}};
  return out;
}

// 5. sunflower detector
Outcome sunflower_checks() {
  Outcome out;
  Rng rng(1005);
  int mismatches = 0, bad_certificates = 0, lemma_misses = 0;
  std::uint64_t lemma_checked = 0;
  Json found = Json::array();
  for (int t = 0; t < 300; ++t) {
    const int n = gen::between(rng, 2, 10);
    const int m = gen::between(rng, 1, std::min(n, 4));
    const int k = gen::between(rng, 2, 4);
    const SetFamily f = gen::random_family_of_size(rng, n, m, static_cast<std::size_t>(gen::between(rng, 0, 25)));
    const auto cert = find_sunflower(f, k);
    std::vector<oracle::Mask> masks;
    for (const auto& u : f) masks.push_back(oracle::to_mask(u));
    if (cert.has_value() != oracle::has_sunflower(masks, k)) ++mismatches;
    if (cert) {
      std::vector<oracle::Mask> petals;
      for (const auto& p : cert->petals) petals.push_back(oracle::to_mask(p));
      if (!is_sunflower(cert->petals) || !oracle::is_sunflower(petals) || !(*is_sunflower(cert->petals) == cert->core)) ++bad_certificates;
      found.push_back(labels(cert->core));
    } else {
      found.push_back(nullptr);
    }
  }

  // Above m!(k-1)^m members a k-sunflower must exist.
  auto lemma = [&](int n, int m, int k) {
    const BigInt bound = factorial(m) * power(BigInt{k - 1}, m);
    std::vector<ElementSet> all;
    for_each_combination(ElementSet::prefix(n), m, [&](const ElementSet& s) { all.push_back(s); });
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << all.size()); ++pick) {
      if (BigInt{std::popcount(pick)} <= bound) continue;
      std::vector<ElementSet> chosen;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (pick >> i & 1u) chosen.push_back(all[i]);
      ++lemma_checked;
      if (!find_sunflower(SetFamily(GroundSet(n), m, chosen), k)) ++lemma_misses;
    }
  };
  for (int n = 1; n <= 8; ++n) {
    lemma(n, 1, 2);
    lemma(n, 1, 3);
  }
  for (int n = 2; n <= 6; ++n) lemma(n, 2, 2);
  for (int t = 0; t < 100; ++t) {
    const int n = gen::between(rng, 6, 10);
    const auto size = static_cast<std::size_t>(gen::between(rng, 9, 20));
    ++lemma_checked;
    if (!find_sunflower(gen::random_family_of_size(rng, n, 2, size), 3)) ++lemma_misses;
  }

  int extremal_misses = 0;
  for (int n = 3; n <= 12; ++n) {
    const ExtremalResult r = max_sunflower_free(n, 1, 3, 1000000);
    if (!r.exact || r.size != 2) ++extremal_misses;
  }
  out.pass = mismatches == 0 && bad_certificates == 0 && lemma_misses == 0 && extremal_misses == 0;
  out.detail = "300 oracle comparisons (" + std::to_string(mismatches) + " mismatches, " + std::to_string(bad_certificates) + " bad certificates), " +
               std::to_string(lemma_checked) + " lemma families (" + std::to_string(lemma_misses) + " misses), extremal m=1 k=3 " +
               (extremal_misses == 0 ? "= 2" : "wrong");
  out.report = {{"mismatches", mismatches},    {"bad_certificates", bad_certificates}, {"lemma_checked", lemma_checked},
                {"lemma_misses", lemma_misses}, {"extremal_misses", extremal_misses},   {"cores", found}};
  return out;
}

// 6. concentration of ||F & C(Y, m)||
Outcome egt_checks() {
  Outcome out;
  int failures = 0, complete_cases = 0;
  Json rows = Json::array();
  for (int n = 2; n <= 16; n += 2)
    for (int m = 1; m <= 3 && m <= n; ++m) {
      const int l = std::max(m, n / 2);
      const EgtReport r = egt_fraction(SetFamily::complete(GroundSet(n), m), {l, 2.0, 0.5, 20000, 6});
      ++complete_cases;
      if (r.fraction_within != 1.0) ++failures;
    }

  // Weighted C([16], 2): w({i, j}) = 1 + (i + j) mod 3.
  std::vector<ElementSet> sets;
  std::vector<Rational> weights;
  for_each_combination(ElementSet::prefix(16), 2, [&](const ElementSet& s) {
    sets.push_back(s);
    const auto idx = s.indices();
    weights.emplace_back(1 + (idx[0] + idx[1]) % 3);
  });
  const SetFamily f(GroundSet(16), 2, sets, weights);
  const EgtReport r = egt_fraction(f, {8, 0.5, 0.5, 20000, 6});
  const bool exact = r.mode == EgtMode::exhaustive && r.mean == r.center;
  if (!exact || !r.gamma_holds) ++failures;
  out.pass = failures == 0;
  out.detail = std::to_string(complete_cases) + " complete families at fraction 1; weighted n=16 m=2 l=8: Gamma(" + std::to_string(r.gamma_b).substr(0, 4) +
               ") " + (r.gamma_holds ? "holds" : "fails") + ", mean " + to_string(r.mean) + (exact ? " = " : " != ") + "center " +
               to_string(r.center) + ", fraction " + std::to_string(r.fraction_within);
  out.report = {{"complete_cases", complete_cases}, {"failures", failures},          {"gamma_holds", r.gamma_holds},
                {"mean", to_string(r.mean)},         {"center", to_string(r.center)}, {"evaluated", r.evaluated},
                {"within", r.within}};
  return out;
}

// 7. find_cores output contract
Outcome cores_contract() {
  Outcome out;
  Rng rng(1007);
  int failures = 0, inputs = 0;
  Json r0s = Json::array();
  while (inputs < 100) {
    const int m = gen::between(rng, 2, 4);
    const int n = m * gen::between(rng, 2, 12 / m);
    const Split contiguous = Split::contiguous(n, m);
    const SetFamily f = gen::random_family(rng, n, m, 0.2 + 0.8 * rng.uniform01()).filter([&](const ElementSet& u) {
      return contiguous.transversal(u);
    });
    if (f.empty()) continue;
    ++inputs;
    PipelineConfig cfg;
    cfg.f_theta = 0.05 + 0.45 * rng.uniform01();
    cfg.f_rho = 1 + 3 * rng.uniform01();
    const auto split = std::make_shared<const Split>(contiguous);
    const CoresResult res = find_cores(f, split, cfg);
    r0s.push_back(res.r0);
    bool ok = BigInt{res.f_hat.size()} * power(BigInt{3}, m + 1) >= BigInt{f.size()};
    std::vector<ElementSet> joined;
    for (const auto& cf : res.cores) {
      ok = ok && cf.core.size() == res.r0 && is_on_subsplit(cf.core, Subsplit::full(split));
      ok = ok && static_cast<double>(cf.family.size()) >= cfg.f(res.r0, f.size());
      for (const auto& u : cf.family) {
        ok = ok && cf.core.is_subset_of(u);
        joined.push_back(u);
      }
    }
    std::sort(joined.begin(), joined.end());
    ok = ok && joined == res.f_hat.sets();
    std::map<ElementSet, std::size_t> links;
    for (const auto& u : res.f_hat)
      for_each_nonempty_subset(u, [&](const ElementSet& s) {
        if (s.size() > res.r0) ++links[s];
      });
    for (const auto& [s, count] : links) ok = ok && static_cast<double>(count) < cfg.f(s.size(), f.size());
    if (!ok) ++failures;
  }
  out.pass = failures == 0;
  out.detail = std::to_string(inputs) + " inputs, " + std::to_string(failures) + " contract failures";
  out.report = {{"inputs", inputs}, {"failures", failures}, {"r0", r0s}};
  return out;
}

// 8. planted pipeline run
Outcome planted_pipeline() {
  Outcome out;
  const FamilyDocument doc = load_family(std::string(SUNFLOWER_DATA_DIR) + "/planted_12_3.json");
  PipelineConfig cfg;
  cfg.k = 3;
  cfg.eps = 0.5;
  cfg.h = 1;
  cfg.c = 1;
  cfg.b = 2;
  cfg.delta = 0.25;
  cfg.core_cap = 1;
  cfg.f_theta = 0.5;
  cfg.f_rho = 1;
  cfg.reconstruct_ratio = 1;
  cfg.slack_low = 0.9;
  cfg.slack_high = 1.0;
  cfg.lift_rounds = 2;
  PipelineOptions opts;
  opts.split = doc.split;
  const PipelineReport rep = run_pipeline(doc.family, cfg, 2024, opts);

  bool all_valid = true;
  Json trace = Json::array();
  for (const auto& t : rep.trace) {
    all_valid = all_valid && t.valid;
    trace.push_back({t.stage, t.rank, t.size, t.valid});
  }
  bool sound = false;
  Json certificate = nullptr;
  if (rep.certificate) {
    std::vector<oracle::Mask> petals;
    for (const auto& p : rep.certificate->petals) petals.push_back(oracle::to_mask(p));
    sound = rep.certificate->petals.size() == 3 && oracle::is_sunflower(petals) && is_sunflower(rep.certificate->petals).has_value();
    for (const auto& p : rep.certificate->petals) sound = sound && doc.family.contains(p);
    Json ps = Json::array();
    for (const auto& p : rep.certificate->petals) ps.push_back(labels(p));
    certificate = {{"core", labels(rep.certificate->core)}, {"petals", ps}};
  }
  out.pass = rep.reached_rank_m && sound && all_valid;
  std::string sizes;
  for (const auto& t : rep.trace) sizes += (sizes.empty() ? "" : " ") + std::to_string(t.size);
  out.detail = "rank " + std::to_string(rep.final_rank) + "/" + std::to_string(rep.m) + ", trace sizes " + sizes + ", " +
               (all_valid ? "all PSFs valid" : "invalid PSF in trace") + ", certificate " +
               (rep.certificate ? (sound ? "sound " + certificate["petals"].dump() : "unsound") : "missing: " + rep.failure);
  out.report = {{"final_rank", rep.final_rank}, {"trace", trace}, {"certificate", certificate}};
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "gamma oracle equivalence", 10, gamma_agreement},
      {2, "sparsity under extension", 60, kappa_sweep},
      {3, "phase-2 inequality", 60, phase2_sweep},
      {4, "dense split", 60, split_sweep},
      {5, "sunflower detector", 0, sunflower_checks},
      {6, "egt concentration", 120, egt_checks},
      {7, "find_cores contract", 0, cores_contract},
      {8, "planted pipeline", 300, planted_pipeline},
  };

  bool all = true;
  std::vector<std::string> first_pass;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    first_pass.push_back(o.report.dump());
    char timing[64];
    if (c.limit_seconds > 0)
      std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, c.limit_seconds);
    else
      std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("criterion %d %s: %s (%s) %s\n", c.id, c.name, pass ? "PASS" : "FAIL", timing, o.detail.c_str());
    std::fflush(stdout);
  }

  int differing = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.report = {{"exception", e.what()}};
    }
    if (o.report.dump() != first_pass[i]) ++differing;
  }
  const bool deterministic = differing == 0;
  all = all && deterministic;
  std::printf("criterion 9 determinism: %s (%d of %zu structured outputs differ on rerun)\n", deterministic ? "PASS" : "FAIL", differing,
              criteria.size());
  return all ? 0 : 1;
}
