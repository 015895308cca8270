#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sunflower.hpp"

namespace sunflower::cli {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2 };

namespace detail {

inline Json set_json(const ElementSet& s) { return Json(s.labels()); }

inline Json big_json(const BigInt& v) {
  if (abs(v) <= BigInt{std::numeric_limits<long long>::max()}) return Json(v.convert_to<long long>());
  return Json(v.str());
}

/// Non-finite doubles become strings, since JSON has no infinity.
inline Json real_json(double v) {
  if (std::isfinite(v)) return Json(v);
  if (std::isnan(v)) return Json("nan");
  return Json(v > 0 ? "inf" : "-inf");
}

inline ElementSet parse_labels(const std::string& text, int n) {
  ElementSet s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    int label = 0;
    try {
      label = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad element label '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("bad element label '" + item + "'");
    if (label < 1 || label > n) throw std::invalid_argument("label " + std::to_string(label) + " outside 1.." + std::to_string(n));
    s.insert(label - 1);
  }
  return s;
}

/// key: value lines. Families are summarized; everything else is printed.
inline void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const Json& v = it.value();
    if (it.key() == "family" && v.is_object()) {
      out << key << ": " << v["sets"].size() << " sets over n=" << v["n"].dump() << ", m=" << v["m"].dump() << '\n';
    } else if (v.is_object()) {
      render_text(v, key, out);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t i = 0; i < v.size(); ++i) render_text(v[i], key + "[" + std::to_string(i) + "]", out);
    } else if (v.is_string()) {
      out << key << ": " << v.get<std::string>() << '\n';
    } else {
      out << key << ": " << v.dump() << '\n';
    }
  }
}

struct Shared {
  std::string input;
  std::string output;
  std::string format = "text";
  std::uint64_t seed = 1;
};

inline void add_shared(CLI::App* cmd, Shared& shared, bool needs_input) {
  auto* in = cmd->add_option("-i,--input", shared.input, "Family file (JSON: n, m, sets, optional weights and split)");
  if (needs_input) in->required();
  cmd->add_option("-o,--output", shared.output, "Write the report here instead of stdout");
  cmd->add_option("--format", shared.format, "Report format")->check(CLI::IsMember({"text", "json", "structured"}));
  cmd->add_option("--seed", shared.seed, "Seed for every random choice");
}

struct ConfigFlags {
  int k = 3;
  std::optional<double> eps, h, c, b, delta, core_cap, f_theta, f_rho, reconstruct_ratio, group_floor, slack_low, slack_high;
  std::optional<int> lift_rounds;
  std::optional<std::uint64_t> lift_enum_cap, lift_samples, tuple_budget;
  bool assert_bounds = false;

  void add(CLI::App* cmd, bool lifting) {
    cmd->add_option("--k", k, "Number of petals")->check(CLI::Range(2, 64));
    cmd->add_option("--eps", eps, "eps in (0,1); every unset constant is derived from it (default 0.5)");
    cmd->add_option("--h", h, "h (derived: exp(1/eps))");
    cmd->add_option("--c", c, "c (derived: exp(h))");
    cmd->add_option("--b", b, "Gamma parameter b (derived: c k ln k)");
    cmd->add_option("--delta", delta, "Seed density delta (derived: eps / (k ln k))");
    cmd->add_option("--core-cap", core_cap, "Core size cap as a fraction of m (derived: 1/c)");
    cmd->add_option("--f-theta", f_theta, "Threshold f(x) = f_theta f_rho^-x |F| (derived: eps^3m / k)");
    cmd->add_option("--f-rho", f_rho, "Threshold decay (derived: c^h k)");
    if (!lifting) return;
    cmd->add_option("--reconstruct-ratio", reconstruct_ratio, "Heavy-link ratio (derived: c^sqrt(h) k ln k)");
    cmd->add_option("--group-floor", group_floor, "Discard regrouped families below this share of |F(Z)| (default 3^-m)");
    cmd->add_option("--slack-low", slack_low, "Lower slack of the petal window (derived: exp(-h))");
    cmd->add_option("--slack-high", slack_high, "Upper slack of the petal window (derived: exp(-h))");
    cmd->add_option("--lift-rounds", lift_rounds, "Lifting rounds per element (derived: ceil(eps^-1/2))");
    cmd->add_option("--lift-enum-cap", lift_enum_cap, "Enumerate seed sets up to this many, else sample");
    cmd->add_option("--lift-samples", lift_samples, "Seed sets drawn when sampling");
    cmd->add_option("--tuple-budget", tuple_budget, "Node budget of the disjoint seed tuple search");
    cmd->add_flag("--assert-paper-bounds", assert_bounds, "Fail when a measured quantitative target misses");
  }

  PipelineConfig build(int m) const {
    const double e = eps.value_or(0.5);
    if (!(e > 0 && e < 1)) throw ConfigError("eps must lie in (0, 1)");
    PipelineConfig cfg = PipelineConfig::derived(e, k, m);
    auto set = [](double& field, const std::optional<double>& v) {
      if (v) field = *v;
    };
    set(cfg.h, h);
    set(cfg.c, c);
    set(cfg.b, b);
    set(cfg.delta, delta);
    set(cfg.core_cap, core_cap);
    set(cfg.f_theta, f_theta);
    set(cfg.f_rho, f_rho);
    set(cfg.reconstruct_ratio, reconstruct_ratio);
    set(cfg.slack_low, slack_low);
    set(cfg.slack_high, slack_high);
    if (group_floor) cfg.group_floor = group_floor;
    if (lift_rounds) cfg.lift_rounds = *lift_rounds;
    if (lift_enum_cap) cfg.lift_enum_cap = *lift_enum_cap;
    if (lift_samples) cfg.lift_samples = *lift_samples;
    if (tuple_budget) cfg.tuple_budget = *tuple_budget;
    cfg.assert_bounds = assert_bounds;
    cfg.validate();
    return cfg;
  }
};

inline Json config_json(const PipelineConfig& cfg, int m) {
  Json j;
  j["k"] = cfg.k;
  j["eps"] = real_json(cfg.eps);
  j["h"] = real_json(cfg.h);
  j["c"] = real_json(cfg.c);
  j["b"] = real_json(cfg.b);
  j["delta"] = real_json(cfg.delta);
  j["core_cap"] = real_json(cfg.core_cap);
  j["f_theta"] = real_json(cfg.f_theta);
  j["f_rho"] = real_json(cfg.f_rho);
  j["reconstruct_ratio"] = real_json(cfg.reconstruct_ratio);
  j["group_floor"] = real_json(cfg.group_floor_for(m));
  j["slack_low"] = real_json(cfg.slack_low);
  j["slack_high"] = real_json(cfg.slack_high);
  j["lift_rounds"] = cfg.lift_rounds;
  j["lift_enum_cap"] = cfg.lift_enum_cap;
  j["lift_samples"] = cfg.lift_samples;
  j["tuple_budget"] = cfg.tuple_budget;
  j["assert_bounds"] = cfg.assert_bounds;
  return j;
}

inline Json cores_json(const CoresResult& res) {
  Json j;
  j["r0"] = res.r0;
  j["input_size"] = res.input_size;
  j["f_hat_size"] = res.f_hat.size();
  Json levels = Json::array();
  for (const auto& l : res.levels)
    levels.push_back({{"r", l.r}, {"cores", l.cores}, {"extracted", l.extracted}, {"threshold", real_json(l.threshold)}});
  j["levels"] = std::move(levels);
  Json cores = Json::array();
  for (const auto& cf : res.cores) cores.push_back({{"core", set_json(cf.core)}, {"size", cf.family.size()}});
  j["cores"] = std::move(cores);
  j["split"] = split_to_json(*res.split);
  j["family"] = family_to_json(res.f_hat, *res.split);
  return j;
}

/// PSF stages also carry |F(ZZ)| / |F_hat| next to the normality threshold
/// eps^(2(r - r0)) and the reference levels eps^2 and eps^(2/3).
inline Json trace_json(const TraceEntry& t, const PipelineReport& rep, const PipelineConfig& cfg) {
  Json j;
  j["stage"] = t.stage;
  j["rank"] = t.rank;
  j["size"] = t.size;
  j["valid"] = t.valid;
  j["normal"] = t.normal ? Json(*t.normal) : Json(nullptr);
  if (t.normal && rep.f_hat_size > 0) {
    j["ratio"] = real_json(static_cast<double>(t.size) / static_cast<double>(rep.f_hat_size));
    j["thresholds"] = {{"normal", real_json(std::pow(cfg.eps, 2.0 * (t.rank - rep.r0)))},
                       {"eps^2", real_json(cfg.eps * cfg.eps)},
                       {"eps^(2/3)", real_json(std::pow(cfg.eps, 2.0 / 3.0))}};
  }
  j["detail"] = t.detail;
  return j;
}

inline Json pipeline_json(const PipelineReport& rep, const PipelineConfig& cfg) {
  Json j;
  j["reached_rank_m"] = rep.reached_rank_m;
  j["final_rank"] = rep.final_rank;
  j["m"] = rep.m;
  j["padded_n"] = rep.padded_n;
  j["r0"] = rep.r0;
  j["input_size"] = rep.input_size;
  j["on_split"] = rep.on_split;
  j["f_hat_size"] = rep.f_hat_size;
  j["failure"] = rep.failure;
  if (rep.certificate) {
    Json petals = Json::array();
    for (const auto& p : rep.certificate->petals) petals.push_back(set_json(p));
    j["certificate"] = {{"core", set_json(rep.certificate->core)}, {"petals", std::move(petals)}};
  } else {
    j["certificate"] = nullptr;
  }
  j["config"] = config_json(cfg, rep.m);
  j["split"] = rep.split ? split_to_json(*rep.split) : Json(nullptr);
  Json trace = Json::array();
  for (const auto& t : rep.trace) trace.push_back(trace_json(t, rep, cfg));
  j["trace"] = std::move(trace);
  Json recs = Json::array();
  for (const auto& s : rep.reconstructs)
    recs.push_back({{"rank", s.rank},
                    {"input_size", s.input_size},
                    {"output_size", s.output_size},
                    {"groups_considered", s.groups_considered},
                    {"groups_discarded", s.groups_discarded},
                    {"elements_in", s.elements_in},
                    {"elements_out", s.elements_out},
                    {"elements_dropped", s.elements_dropped},
                    {"sets_filtered", s.sets_filtered},
                    {"size_ratio", real_json(s.size_ratio)},
                    {"size_target", real_json(s.size_target)},
                    {"size_target_met", s.size_target_met},
                    {"max_singleton_ratio", real_json(s.max_singleton_ratio)},
                    {"singleton_target_met", s.singleton_target_met}});
  j["reconstruct"] = std::move(recs);
  Json lifts = Json::array();
  for (const auto& s : rep.lifts)
    lifts.push_back({{"rank", s.rank},
                     {"input_size", s.input_size},
                     {"output_size", s.output_size},
                     {"elements_in", s.elements_in},
                     {"elements_skipped", s.elements_skipped},
                     {"produced", s.produced},
                     {"seed_size", s.seed_size},
                     {"extended_size", s.extended_size},
                     {"min_seed_density", real_json(s.min_seed_density)},
                     {"seed_density_target", real_json(s.seed_density_target)},
                     {"seed_density_met", s.seed_density_met},
                     {"min_consumed", real_json(s.min_consumed)},
                     {"max_consumed", real_json(s.max_consumed)},
                     {"consumed_window_met", s.consumed_window_met}});
  j["lift"] = std::move(lifts);
  Json diags = Json::array();
  for (const auto& d : rep.diagnostics) diags.push_back({{"element", d.element}, {"round", d.round}, {"reason", d.reason}});
  j["diagnostics"] = std::move(diags);
  return j;
}

struct Result {
  Json report;
  int code = kOk;
};

inline void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "text")
    render_text(report, "", out);
  else
    out << report.dump(2) << '\n';
}

}  // namespace detail

/**
 * Runs one subcommand. Exit codes: 0 success or check holds, 1 check failed,
 * 2 usage, configuration or input error.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Set family toolkit: spread conditions, splits, extensions, sunflower search and the partial sunflower pipeline.\n"
               "Element labels are 1-based; logarithms are natural."};
  app.name("sunflower");
  // --h is the constant h, so help is --help only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Shared shared;
  ConfigFlags flags;
  std::vector<std::pair<CLI::App*, std::function<Result()>>> commands;
  auto add = [&](const std::string& name, const std::string& help, bool needs_input) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_shared(cmd, shared, needs_input);
    return cmd;
  };
  auto load = [&] { return load_family(shared.input); };

  // gamma
  double b = 0;
  auto* gamma_cmd = add("gamma", "Check the Gamma(b) condition ||F[S]|| b^|S| < ||F|| over every nonempty S (exact). Exit 1 with the lexicographically smallest violating S.", true);
  gamma_cmd->add_option("--b", b, "b > 0")->required();
  commands.emplace_back(gamma_cmd, [&] {
    const auto doc = load();
    const GammaReport rep = gamma_check(doc.family, b);
    Json j;
    j["command"] = "gamma";
    j["b"] = real_json(b);
    j["holds"] = rep.holds;
    j["witness"] = rep.witness ? set_json(*rep.witness) : Json(nullptr);
    j["ratio"] = real_json(rep.ratio);
    j["norm"] = to_string(norm(doc.family));
    return Result{j, rep.holds ? kOk : kCheckFailed};
  });

  // sparsity
  auto* sparsity_cmd = add("sparsity", "Sparsity ln C(n,m) - ln |F| (inf for the empty family).", true);
  commands.emplace_back(sparsity_cmd, [&] {
    const auto doc = load();
    Json j;
    j["command"] = "sparsity";
    j["n"] = doc.family.n();
    j["m"] = doc.family.m();
    j["size"] = doc.family.size();
    j["sparsity"] = real_json(sparsity(doc.family));
    return Result{j, kOk};
  });

  // link
  std::string link_set;
  auto* link_cmd = add("link", "Members containing S, with their weights.", true);
  link_cmd->add_option("--set", link_set, "S as comma separated labels, e.g. 1,3 (empty for the empty set)")->required();
  commands.emplace_back(link_cmd, [&] {
    const auto doc = load();
    const ElementSet s = parse_labels(link_set, doc.family.n());
    const SetFamily linked = link(doc.family, s);
    Json j;
    j["command"] = "link";
    j["set"] = set_json(s);
    j["size"] = linked.size();
    j["norm"] = to_string(norm(linked));
    j["family"] = family_to_json(linked);
    return Result{j, kOk};
  });

  // extend
  int extend_l = 0;
  auto* extend_cmd = add("extend", "l-extension: every l-set containing a member (m <= l <= n).", true);
  extend_cmd->add_option("--l", extend_l, "Target size l")->required();
  commands.emplace_back(extend_cmd, [&] {
    const auto doc = load();
    const ExtensionResult ext = extend(doc.family, extend_l);
    Json j;
    j["command"] = "extend";
    j["l"] = extend_l;
    j["source_m"] = ext.source_m;
    j["size"] = ext.family.size();
    j["sparsity_before"] = real_json(sparsity(doc.family));
    j["sparsity_after"] = real_json(sparsity(ext.family));
    j["family"] = family_to_json(ext.family);
    return Result{j, kOk};
  });

  // kappa-check
  std::optional<int> kappa_l;
  auto* kappa_cmd = add("kappa-check", "Check sparsity(Ext(F, l)) <= sparsity(F) exactly for one l or every l in m..n. Exit 1 on a violation.", true);
  kappa_cmd->add_option("--l", kappa_l, "Single l to check");
  commands.emplace_back(kappa_cmd, [&] {
    const auto doc = load();
    const int lo = kappa_l ? *kappa_l : doc.family.m();
    const int hi = kappa_l ? *kappa_l : doc.family.n();
    Json rows = Json::array();
    bool all = true;
    for (int lv = lo; lv <= hi; ++lv) {
      const KappaCheck c = check_kappa_monotone(doc.family, lv);
      all = all && c.holds;
      rows.push_back({{"l", lv}, {"holds", c.holds}, {"sparsity", real_json(c.kappa_source)}, {"extended_sparsity", real_json(c.kappa_extension)}});
    }
    Json j;
    j["command"] = "kappa-check";
    j["holds"] = all;
    j["checks"] = std::move(rows);
    return Result{j, all ? kOk : kCheckFailed};
  });

  // phase2
  auto* phase2_cmd = add("phase2", "Check that the sparsity of the complement of Ext(F,2m) is at least twice that of the complement of F, exactly (needs m <= n/2). Exit 1 on a violation.", true);
  commands.emplace_back(phase2_cmd, [&] {
    const auto doc = load();
    const Phase2Check c = check_phase2(doc.family);
    Json j;
    j["command"] = "phase2";
    j["holds"] = c.holds;
    j["lhs"] = real_json(c.lhs);
    j["rhs"] = real_json(c.rhs);
    return Result{j, c.holds ? kOk : kCheckFailed};
  });

  // split
  std::uint64_t split_tries = 2000;
  auto* split_cmd = add("split", "Search an m-split keeping at least (n/m)^m |F| / C(n,m) members on it: seeded random tries, then exhaustive when small. Exit 1 if none is found.", true);
  split_cmd->add_option("--tries", split_tries, "Random tries before the exhaustive pass");
  commands.emplace_back(split_cmd, [&] {
    const auto doc = load();
    Json j;
    j["command"] = "split";
    try {
      const DenseSplitResult res = find_dense_split(doc.family, shared.seed, split_tries);
      const SetFamily kept = doc.family.filter([&](const ElementSet& u) { return res.split.transversal(u); });
      j["found"] = true;
      j["retained"] = res.retained;
      j["bound"] = to_string(res.bound);
      j["bound_value"] = real_json(to_double(res.bound));
      j["tries"] = res.tries;
      j["exhaustive"] = res.exhaustive;
      j["split"] = split_to_json(res.split);
      j["family"] = family_to_json(kept, res.split);
      return Result{j, kOk};
    } catch (const SplitSearchFailed& e) {
      j["found"] = false;
      j["retained"] = e.best_retained;
      j["achieved_ratio"] = real_json(e.achieved_ratio);
      j["reason"] = e.what();
      return Result{j, kCheckFailed};
    }
  });

  // find-sunflower
  int sf_k = 3;
  bool allow_none = false;
  auto* sf_cmd = add("find-sunflower", "Exact search for k members whose pairwise intersections all equal one core. Exit 1 when none exists.", true);
  sf_cmd->add_option("--k", sf_k, "Number of petals (k >= 2)")->required();
  sf_cmd->add_flag("--allow-none", allow_none, "Exit 0 even when no sunflower exists");
  commands.emplace_back(sf_cmd, [&] {
    const auto doc = load();
    const auto cert = find_sunflower(doc.family, sf_k);
    Json j;
    j["command"] = "find-sunflower";
    j["k"] = sf_k;
    j["found"] = cert.has_value();
    if (cert) {
      Json petals = Json::array();
      for (const auto& p : cert->petals) petals.push_back(set_json(p));
      j["core"] = set_json(cert->core);
      j["petals"] = std::move(petals);
    } else {
      j["result"] = "none";
    }
    return Result{j, cert || allow_none ? kOk : kCheckFailed};
  });

  // extremal
  int ex_n = 0, ex_m = 0, ex_k = 3;
  std::uint64_t ex_budget = 5000000;
  auto* ex_cmd = add("extremal", "Largest k-sunflower-free subfamily of C([n], m) by branch and bound.", false);
  ex_cmd->add_option("--n", ex_n, "Ground set size")->required();
  ex_cmd->add_option("--m", ex_m, "Set size")->required();
  ex_cmd->add_option("--k", ex_k, "Number of petals");
  ex_cmd->add_option("--budget", ex_budget, "Node budget; the result is marked inexact when it runs out");
  commands.emplace_back(ex_cmd, [&] {
    const ExtremalResult res = max_sunflower_free(ex_n, ex_m, ex_k, ex_budget);
    Json j;
    j["command"] = "extremal";
    j["n"] = ex_n;
    j["m"] = ex_m;
    j["k"] = ex_k;
    j["size"] = res.size;
    j["exact"] = res.exact;
    j["nodes"] = res.nodes;
    j["family"] = family_to_json(SetFamily(GroundSet(ex_n), ex_m, res.family));
    return Result{j, kOk};
  });

  // bounds
  std::optional<int> bk, bm;
  int bk_min = 3, bk_max = 3, bm_min = 1, bm_max = 4;
  double bc = 1;
  auto* bounds_cmd = add("bounds", "Table of the classical bound m! (k-1)^m against (c k ln(k+1))^m.", false);
  bounds_cmd->add_option("--k", bk, "Single k (overrides --k-min/--k-max)");
  bounds_cmd->add_option("--m", bm, "Single m (overrides --m-min/--m-max)");
  bounds_cmd->add_option("--k-min", bk_min);
  bounds_cmd->add_option("--k-max", bk_max);
  bounds_cmd->add_option("--m-min", bm_min);
  bounds_cmd->add_option("--m-max", bm_max);
  bounds_cmd->add_option("--c", bc, "Constant c > 0");
  commands.emplace_back(bounds_cmd, [&] {
    const auto rows = bound_table(bk ? *bk : bk_min, bk ? *bk : bk_max, bm ? *bm : bm_min, bm ? *bm : bm_max, bc);
    Json table = Json::array();
    for (const auto& r : rows) table.push_back({{"k", r.k}, {"m", r.m}, {"classical", big_json(r.classical)}, {"bound", real_json(r.bound)}});
    Json j;
    j["command"] = "bounds";
    j["c"] = real_json(bc);
    j["rows"] = std::move(table);
    return Result{j, kOk};
  });

  // egt-sample
  int egt_l = 0;
  double egt_gamma = 0, egt_eps = 0.5;
  std::uint64_t egt_samples = 100000;
  auto* egt_cmd = add("egt-sample",
                      "Fraction of l-sets Y with ||F & C(Y,m)|| within (1 -/+ sqrt(2/(eps gamma))) C(l,m)/C(n,m) ||F||; exhaustive when at most --samples sets, else sampled.",
                      true);
  egt_cmd->add_option("--l", egt_l, "Size of Y")->required();
  egt_cmd->add_option("--gamma", egt_gamma, "gamma > 0")->required();
  egt_cmd->add_option("--eps", egt_eps, "eps in (0,1)");
  egt_cmd->add_option("--samples", egt_samples, "Exhaustive cap and sample count");
  commands.emplace_back(egt_cmd, [&] {
    const auto doc = load();
    const EgtReport r = egt_fraction(doc.family, {egt_l, egt_gamma, egt_eps, egt_samples, shared.seed});
    Json j;
    j["command"] = "egt-sample";
    j["l"] = egt_l;
    j["gamma"] = real_json(egt_gamma);
    j["eps"] = real_json(egt_eps);
    j["mode"] = to_string(r.mode);
    j["evaluated"] = r.evaluated;
    j["within"] = r.within;
    j["fraction_within"] = real_json(r.fraction_within);
    j["lower_factor"] = real_json(r.lower_factor);
    j["upper_factor"] = real_json(r.upper_factor);
    j["center"] = to_string(r.center);
    j["center_value"] = real_json(to_double(r.center));
    j["mean"] = to_string(r.mean);
    j["mean_value"] = real_json(to_double(r.mean));
    j["mean_equals_center"] = r.mean == r.center;
    j["min_value"] = real_json(r.min_value);
    j["max_value"] = real_json(r.max_value);
    j["gamma_b"] = real_json(r.gamma_b);
    j["gamma_holds"] = r.gamma_holds;
    j["gamma_in_range"] = r.gamma_in_range;
    return Result{j, kOk};
  });

  // find-cores
  std::uint64_t cores_tries = 2000;
  auto* cores_cmd = add("find-cores",
                        "Peel dense links level by level (r = m down to 0) and return the first level holding enough of F. Uses the file's split, else searches one.",
                        true);
  flags.add(cores_cmd, false);
  cores_cmd->add_option("--tries", cores_tries, "Random split tries when the file has no split");
  commands.emplace_back(cores_cmd, [&] {
    const auto doc = load();
    const SetFamily family = pad_to_multiple(doc.family).unweighted();
    const PipelineConfig cfg = flags.build(family.m());
    std::optional<Split> split = doc.split;
    if (split && split->n() != family.n()) throw std::invalid_argument("the file's split does not cover the padded ground set");
    if (!split) split = find_dense_split(family, shared.seed, cores_tries).split;
    auto shared_split = std::make_shared<const Split>(*split);
    const SetFamily on = family.filter([&](const ElementSet& u) { return shared_split->transversal(u); });
    Json j;
    j["command"] = "find-cores";
    j["on_split"] = on.size();
    j["config"] = config_json(cfg, family.m());
    const CoresResult res = find_cores(on, shared_split, cfg);
    Json body = cores_json(res);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    return Result{j, kOk};
  });

  // pipeline
  int max_rounds = 16;
  std::string trace_out;
  std::uint64_t pipe_tries = 2000;
  auto* pipe_cmd = add("pipeline",
                       "Dense split, cores, then reconstruct and lift rank by rank up to m; a rank-m element yields a sunflower certificate checked independently. Exit 1 without a certificate.",
                       true);
  flags.add(pipe_cmd, true);
  pipe_cmd->add_option("--max-rounds", max_rounds, "Reconstruct and lift rounds before giving up");
  pipe_cmd->add_option("--trace-out", trace_out, "Write the per-stage trace as JSON lines");
  pipe_cmd->add_option("--tries", pipe_tries, "Random split tries when the file has no split");
  commands.emplace_back(pipe_cmd, [&] {
    const auto doc = load();
    const PipelineConfig cfg = flags.build(doc.family.m());
    PipelineOptions opts;
    opts.max_rounds = max_rounds;
    opts.split = doc.split;
    opts.split_tries = pipe_tries;
    Json j;
    j["command"] = "pipeline";
    int code = kOk;
    try {
      const PipelineReport rep = run_pipeline(doc.family, cfg, shared.seed, opts);
      Json body = pipeline_json(rep, cfg);
      for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
      if (!trace_out.empty()) {
        std::ofstream tf(trace_out);
        if (!tf) throw std::invalid_argument("cannot write " + trace_out);
        for (const auto& t : rep.trace) tf << trace_json(t, rep, cfg).dump() << '\n';
      }
      code = rep.certificate ? kOk : kCheckFailed;
    } catch (const BoundViolation& e) {
      j["bound_violation"] = e.what();
      code = kCheckFailed;
    }
    return Result{j, code};
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (auto& [cmd, run] : commands) {
    if (!cmd->parsed()) continue;
    try {
      const Result res = run();
      if (shared.output.empty()) {
        emit(res.report, shared.format, out);
      } else {
        std::ofstream file(shared.output);
        if (!file) throw std::invalid_argument("cannot write " + shared.output);
        emit(res.report, shared.format, file);
      }
      return res.code;
    } catch (const FormatError& e) {
      err << "error: " << shared.input << ": " << e.what() << '\n';
      return kUsage;
    } catch (const std::logic_error& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::runtime_error& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  return kUsage;
}

}  // namespace sunflower::cli
