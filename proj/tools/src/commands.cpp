#include "qrlab_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "qrlab/catalog.hpp"
#include "qrlab/differential.hpp"
#include "qrlab/grid.hpp"
#include "qrlab/rng.hpp"

#ifndef QRLAB_VERSION_STRING
#define QRLAB_VERSION_STRING "0.0.0"
#endif

namespace qrlab::cli {

namespace {

int exit_code_for(const Error& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return kExitCheckFailed;
  return kExitUsage;
}

template <class F>
auto guarded(const std::string& check, F&& f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const CheckAborted&) {
    throw;
  } catch (const Error& e) {
    throw CheckAborted(check, e);
  }
}

const std::vector<std::string> kSweepMaps = {
    "identity",
    "translate:b1=0.25,b2=-0.1",
    "linear:a11=1.5,a12=0.4,a21=-0.2,a22=0.8",
    "radial_stretch:alpha=0.3",
    "radial_stretch:alpha=0.5",
    "radial_stretch:alpha=0.7",
    "winding:k=2",
    "rank_deficient",
};

// Target exponent for the K1 = 1, K2 > 0 class unless --alpha fixes one.
constexpr double kAnyBelowOneTarget = 0.5;
constexpr double kHolderSlack = 0.02;
constexpr std::size_t kDifferentiabilityPoints = 20;

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Verdicts {
  Json checks = Json::array();
  std::vector<std::string> lines;
  std::size_t passed = 0;
  std::vector<std::string> failed;
  bool exhausted = false;

  void record(const std::string& check, const std::string& label, Json inputs, const Json& body, bool pass,
              const std::string& diagnostic = {}) {
    Json entry;
    entry["check"] = check;
    entry["map"] = label;
    entry["inputs"] = std::move(inputs);
    for (const auto& [key, value] : body.items()) {
      if (key == "check" || key == "pass" || key == "diagnostic") continue;
      entry[key] = value;
    }
    entry["pass"] = pass;
    if (!diagnostic.empty()) entry["diagnostic"] = diagnostic;
    std::string line = std::string(pass ? "PASS  " : "FAIL  ") + check + "  " + label;
    if (body.contains("worst_slack") && body["worst_slack"].is_number())
      line += "  worst_slack=" + short_number(body["worst_slack"].get<double>());
    if (!pass && !diagnostic.empty()) line += "  (" + diagnostic + ")";
    lines.push_back(std::move(line));
    if (pass) {
      ++passed;
    } else {
      failed.push_back(check + " [" + label + "]");
    }
    checks.push_back(std::move(entry));
  }

  void record(const CheckReport& report, const std::string& label, Json inputs) {
    std::string name = report.check;
    std::replace(name.begin(), name.end(), '_', '-');
    record(name, label, std::move(inputs), to_json(report), report.pass, report.diagnostic);
  }

  int exit_code() const {
    if (exhausted) return kExitBudget;
    return failed.empty() ? kExitPass : kExitCheckFailed;
  }

  std::string summary() const {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    out += std::to_string(passed) + "/" + std::to_string(passed + failed.size()) + " checks passed";
    if (exhausted) out += "; quadrature budget exhausted";
    out += "\n";
    return out;
  }
};

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (c.map) j["map"] = *c.map;
  if (c.grid) j["grid"] = *c.grid;
  if (c.meta) j["meta"] = *c.meta;
  if (c.omega) j["omega"] = *c.omega;
  if (c.compact) j["compact"] = *c.compact;
  if (c.center) j["center"] = *c.center;
  if (c.k1) j["k1"] = number(*c.k1);
  if (c.k2) j["k2"] = number(*c.k2);
  if (c.samples_csv) j["samples_csv"] = *c.samples_csv;
  if (!c.suites.empty()) j["suites"] = c.suites;
  j["alpha"] = c.alpha;
  j["radii"] = c.radii;
  j["pairs"] = c.pairs;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["tol_rel"] = number(c.tol_rel);
  j["budget"] = c.budget;
  std::string replay = "qrlab";
  for (const auto& a : c.replay_args()) replay += " " + a;
  j["replay"] = replay;
  return j;
}

Json report_header(const RunConfig& c) {
  Json j;
  j["schema"] = 1;
  j["version"] = QRLAB_VERSION_STRING;
  if (!c.no_timestamp) j["timestamp"] = timestamp_utc();
  j["config"] = config_json(c);
  return j;
}

std::string map_label(const MappingSpec& map, const RunConfig& config) {
  if (config.grid) return "grid:" + *config.grid;
  return map_selector(map);
}

Json pair_json(const DistortionPair& p) { return Json{{"k1", number(p.k1())}, {"k2", number(p.k2())}}; }

// Minimal pair read off a fitted frontier: (K1*, 0) when K2 = 0 is
// reachable, otherwise (1, K2*(1)).
DistortionPair pair_from_frontier(const DistortionFrontier& frontier) {
  const double k1 = frontier.minimal_k1(0.0);
  if (std::isfinite(k1)) return DistortionPair(k1 > 0.0 ? k1 : 1.0, 0.0);
  return DistortionPair(1.0, frontier.minimal_k2(1.0));
}

QuadratureOptions quadrature_options(const RunConfig& c, std::uint64_t seed) {
  QuadratureOptions q;
  q.tol_rel = c.tol_rel;
  q.budget = c.budget;
  q.seed = seed;
  return q;
}

struct Analysis {
  MappingSpec map;
  std::string label;
  DomainRegion compact = DomainRegion::ball(Vec{0.0, 0.0}, 1.0);
  Vec center;
  DistortionPair pair{1.0, 0.0};
  std::string pair_source;
  std::optional<DistortionFrontier> frontier;
  std::optional<RadialProfile> profile;
  std::optional<MonotoneProfile> monotone;
  std::optional<HolderEstimate> holder;
  std::optional<QuadratureResult> energy;
};

bool wants(const std::set<std::string>& wanted, const std::string& name) { return wanted.contains(name); }

bool needs_profile(const std::set<std::string>& w) {
  for (const char* name : {"v-monotone", "differential-inequality", "isoperimetric", "fubini", "sign-consequence", "morrey"})
    if (w.contains(name)) return true;
  return false;
}

// Runs the requested per-map checks. `sweep` adds the catalog-wide
// sensitivity probes.
Analysis analyze_map(MappingSpec map, const RunConfig& config, const std::set<std::string>& wanted,
                     std::uint64_t seed, bool sweep, Verdicts& verdicts) {
  Analysis a;
  a.label = map_label(map, config);
  a.compact = resolve_compact(config, map);
  a.center = resolve_center(config, map);
  a.map = std::move(map);
  const MappingSpec& f = a.map;
  const std::string& label = a.label;

  // Distortion samples, frontier and the pair under test.
  const std::uint64_t sample_seed = derive_seed(seed, 1);
  const auto samples = guarded("distortion", [&] {
    return draw_distortion_samples(f, f.domain, config.samples, sample_seed);
  });
  a.frontier = guarded("frontier", [&] { return fit_minimal_distortion(samples); });
  if (config.k1) {
    a.pair = DistortionPair(*config.k1, *config.k2);
    a.pair_source = "override";
  } else if (f.declared_distortion) {
    a.pair = *f.declared_distortion;
    a.pair_source = "declared";
  } else {
    a.pair = pair_from_frontier(*a.frontier);
    a.pair_source = "fitted";
  }
  Json pair_inputs = pair_json(a.pair);
  pair_inputs["pair_source"] = a.pair_source;
  const double target_alpha = resolve_alpha(config).value_or(kAnyBelowOneTarget);

  if (wants(wanted, "distortion") || wants(wanted, "sign")) {
    const DistortionVerification dv = guarded("distortion", [&] {
      return verify_distortion(f, f.domain, a.pair, config.samples, sample_seed);
    });
    Json inputs = pair_inputs;
    inputs["samples"] = config.samples;
    inputs["seed"] = sample_seed;
    if (wants(wanted, "distortion")) {
      Json body{{"max_residual", number(dv.max_residual)},
                {"tolerance", number(dv.tolerance)},
                {"violation_fraction", number(dv.violation_fraction)},
                {"worst_point", dv.worst_point}};
      verdicts.record("distortion", label, inputs, body, dv.inequality_holds(),
                      dv.inequality_holds() ? "" : "inequality violated at " + short_number(dv.violation_fraction * 100) + "% of samples");
    }
    if (wants(wanted, "sign")) {
      Json body{{"tau", dv.sign.tau}, {"positive", dv.sign.positive}, {"negative", dv.sign.negative}};
      verdicts.record("sign", label, inputs, body, dv.sign.consistent,
                      dv.sign.consistent ? "" : "Jacobian changes sign");
    }
  }

  if (wants(wanted, "frontier")) {
    const double k2_star = a.frontier->minimal_k2(a.pair.k1());
    const double tol = 1e-6 * std::max(1.0, a.pair.k2());
    const bool feasible = k2_star <= a.pair.k2() + tol;
    const bool minimal = a.pair_source != "declared" || std::abs(k2_star - a.pair.k2()) <= tol;
    Json body = to_json(*a.frontier);
    body["k2_star_at_k1"] = number(k2_star);
    body["tolerance"] = number(tol);
    std::string diag;
    if (!feasible) diag = "pair lies below the fitted frontier (K2*(K1) = " + short_number(k2_star) + ")";
    else if (!minimal) diag = "declared pair is not on the fitted frontier (K2*(K1) = " + short_number(k2_star) + ")";
    verdicts.record("frontier", label, pair_inputs, body, feasible && minimal, diag);
  }

  const double rho = f.domain.boundary_distance(a.center);
  ProfileOptions po;
  po.quadrature = quadrature_options(config, derive_seed(seed, 2));
  if (needs_profile(wanted)) {
    const auto radii = default_radii(rho, config.radii);
    a.profile = guarded("profile", [&] { return energy_profile(f, a.center, radii, po); });
    verdicts.exhausted = verdicts.exhausted || a.profile->budget_exhausted();
    a.monotone = compute_v(*a.profile, a.pair);
  }
  Json profile_inputs = pair_inputs;
  profile_inputs["center"] = a.center;
  profile_inputs["radii"] = config.radii;
  profile_inputs["tol_rel"] = number(config.tol_rel);
  profile_inputs["seed"] = po.quadrature.seed;

  if (wants(wanted, "v-monotone")) {
    verdicts.record(check_v_monotone(*a.monotone), label, profile_inputs);
    if (sweep && f.name == "radial_stretch") {
      // A pair with K1 below 1/alpha is infeasible; the checker must notice.
      const DistortionPair wrong(1.0 / f.params.at("alpha") - 0.5, 0.0);
      const CheckReport probe = check_v_monotone(compute_v(*a.profile, wrong));
      Json inputs = profile_inputs;
      inputs["k1"] = number(wrong.k1());
      inputs["k2"] = 0.0;
      inputs["expect"] = "fail";
      verdicts.record("v-monotone-sensitivity", label, inputs, to_json(probe), !probe.pass,
                      probe.pass ? "checker accepted an infeasible pair" : "");
    }
  }
  if (wants(wanted, "differential-inequality"))
    verdicts.record(check_differential_inequality(*a.profile, a.pair), label, profile_inputs);
  if (wants(wanted, "isoperimetric")) verdicts.record(isoperimetric_check(*a.profile), label, profile_inputs);
  if (wants(wanted, "fubini")) verdicts.record(fubini_check(*a.profile), label, profile_inputs);
  if (wants(wanted, "sign-consequence")) {
    const SignVerdict sign = jacobian_sign_verdict(samples);
    if (sign.consistent) {
      verdicts.record(sign_consequence_check(*a.profile), label, profile_inputs);
    } else {
      verdicts.record("sign-consequence", label, profile_inputs, Json{{"skipped", true}}, true,
                      "skipped: Jacobian sign is not consistent");
    }
  }

  if (wants(wanted, "morrey") || wants(wanted, "equicontinuity")) {
    a.energy = guarded("energy", [&] { return domain_energy(f, po); });
    verdicts.exhausted = verdicts.exhausted || a.energy->budget_exhausted;
  }
  if (wants(wanted, "morrey")) {
    GrowthInputs in;
    in.k1 = a.pair.k1();
    in.k2 = a.pair.k2();
    in.energy = a.energy->value;
    in.d = rho;
    in.n = f.n;
    if (predicted_exponent(a.pair).cls == HolderClass::any_below_one) in.target_alpha = target_alpha;
    const GrowthBound gb = guarded("morrey", [&] { return growth_bound(in); });
    const CheckReport rep = check_morrey_condition(*a.profile, gb);
    Json inputs = profile_inputs;
    inputs["energy"] = to_json(*a.energy);
    Json body = to_json(rep);
    body["growth_bound"] = to_json(gb);
    verdicts.record("morrey", label, inputs, body, rep.pass, rep.diagnostic);
  }

  if (wants(wanted, "holder")) {
    HolderOptions ho;
    ho.alpha = resolve_alpha(config);
    ho.pair_count = config.pairs;
    ho.seed = derive_seed(seed, 3);
    a.holder = guarded("holder", [&] { return estimate_holder(f, a.compact, ho); });
    const HolderPrediction pred = predicted_exponent(a.pair);
    const double predicted = pred.exponent(target_alpha);
    bool pass = std::isfinite(a.holder->L_hat);
    std::string diag;
    if (!ho.alpha) {
      if (a.holder->flagged) {
        pass = false;
        diag = "alpha_hat outside (0, 1.5)";
      } else if (a.holder->alpha_hat < predicted - kHolderSlack) {
        pass = false;
        diag = "alpha_hat " + short_number(a.holder->alpha_hat) + " below the predicted exponent " + short_number(predicted);
      }
    }
    Json inputs = pair_inputs;
    inputs["alpha"] = config.alpha;
    inputs["pairs"] = config.pairs;
    inputs["seed"] = ho.seed;
    inputs["compact"] = to_json(a.compact);
    Json body = to_json(*a.holder);
    body["prediction"] = to_json(pred);
    body["tolerance"] = number(kHolderSlack);
    verdicts.record("holder", label, inputs, body, pass, diag);
  }

  if (wants(wanted, "equicontinuity")) {
    MappingSpec member = f;
    member.declared_distortion = a.pair;
    const std::vector<MappingSpec> family{member};
    const double bound = a.energy->value + a.energy->error_estimate;
    const double diam = a.compact.diameter();
    const std::vector<double> scales{0.2 * diam, 0.1 * diam, 0.05 * diam, 0.025 * diam};
    EquicontinuityOptions eo;
    eo.seed = derive_seed(seed, 4);
    eo.profile = po;
    const EquicontinuityReport rep =
        guarded("equicontinuity", [&] { return equicontinuity_check(family, a.compact, bound, scales, eo); });
    Json inputs{{"energy_bound", number(bound)}, {"scales", scales}, {"seed", eo.seed}, {"compact", to_json(a.compact)}};
    verdicts.record("equicontinuity", label, inputs, to_json(rep), rep.pass,
                    rep.pass ? "" : "oscillation exceeds the shared modulus");
  }

  if (wants(wanted, "differentiability")) {
    const std::uint64_t dseed = derive_seed(seed, 5);
    Json probes = Json::array();
    bool all = true;
    std::string diag;
    for (std::size_t i = 0; i < kDifferentiabilityPoints; ++i) {
      CounterRng rng(dseed, i);
      const Vec p = guarded("differentiability", [&] { return sample_regular_point(f, a.compact, rng); });
      const auto radii = default_probe_radii(f, p);
      const DifferentiabilityReport rep = guarded("differentiability", [&] {
        return differentiability_check(f, p, radii, 64, derive_seed(dseed, 1000 + i));
      });
      if (!rep.pass && all) diag = rep.diagnostic;
      all = all && rep.pass;
      probes.push_back(to_json(rep));
    }
    Json inputs{{"points", kDifferentiabilityPoints}, {"seed", dseed}, {"compact", to_json(a.compact)}};
    verdicts.record("differentiability", label, inputs, Json{{"probes", std::move(probes)}}, all, diag);

    // Near a singular point the remainder does not vanish at scales well
    // above the distance to it.
    for (const Vec& s : f.singular_points) {
      if (!a.compact.contains(s)) continue;
      Vec p = s;
      p[0] += 1e-4;
      const double reach = f.domain.boundary_distance(p);
      const std::vector<double> radii{0.1 * reach, 0.01 * reach, 0.001 * reach};
      const DifferentiabilityReport rep = guarded("differentiability-singular", [&] {
        return differentiability_check(f, p, radii, 64, derive_seed(dseed, 999));
      });
      Json in{{"singular_point", s}, {"offset", number(1e-4)}, {"expect", "fail"}};
      verdicts.record("differentiability-singular", label, in, to_json(rep), !rep.pass,
                      rep.pass ? "remainder vanished next to a singular point" : "");
    }
  }
  return a;
}

std::set<std::string> expand_suites(const std::vector<std::string>& requested) {
  std::set<std::string> out;
  std::vector<std::string> items;
  for (const auto& r : requested) {
    std::stringstream ss(r);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(item);
  }
  if (items.empty()) items.push_back("all");
  for (const auto& item : items) {
    if (item == "all") {
      out.insert(suite_names().begin(), suite_names().end());
    } else if (std::find(suite_names().begin(), suite_names().end(), item) != suite_names().end()) {
      out.insert(item);
    } else {
      throw UsageError("unknown suite '" + item + "'");
    }
  }
  return out;
}

void family_equicontinuity(const RunConfig& config, Verdicts& verdicts) {
  std::vector<MappingSpec> family;
  std::string label = "radial_stretch:alpha={0.5..0.9}+identity";
  for (double alpha : {0.5, 0.6, 0.7, 0.8, 0.9}) family.push_back(catalog_lookup("radial_stretch", {{"alpha", alpha}}));
  family.push_back(catalog_lookup("identity"));
  const DomainRegion v = DomainRegion::ball(Vec{0.0, 0.0}, 0.5);
  const double bound = 2.0 * std::numbers::pi / 0.5;
  const std::vector<double> scales{0.2, 0.1, 0.05, 0.025};
  EquicontinuityOptions eo;
  eo.seed = derive_seed(config.seed, 0xe9);
  eo.profile.quadrature = quadrature_options(config, derive_seed(config.seed, 0xea));
  const EquicontinuityReport rep =
      guarded("equicontinuity", [&] { return equicontinuity_check(family, v, bound, scales, eo); });
  Json inputs{{"energy_bound", number(bound)}, {"scales", scales}, {"seed", eo.seed}, {"compact", to_json(v)}};
  verdicts.record("equicontinuity", label, inputs, to_json(rep), rep.pass,
                  rep.pass ? "" : "oscillation exceeds the shared modulus");
}

}  // namespace

CheckAborted::CheckAborted(std::string check, const Error& cause)
    : Error("check '" + check + "' aborted: " + cause.what()), check_(std::move(check)), exit_code_(exit_code_for(cause)) {}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "distortion", "sign", "frontier", "v-monotone", "differential-inequality", "isoperimetric",
      "fubini", "sign-consequence", "morrey", "holder", "equicontinuity", "differentiability"};
  return names;
}

CommandResult cmd_catalog(const RunConfig& config, std::optional<std::size_t> n_filter) {
  CommandResult result;
  result.report = report_header(config);
  Json entries = Json::array();
  std::ostringstream text;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-20s %-44s %s\n", "name", "parameters", "declared pair", "declared alpha");
  text << line;
  for (const CatalogEntry& e : catalog_entries()) {
    if (n_filter && e.only_dimension && *e.only_dimension != *n_filter) continue;
    std::string params;
    Json jp = Json::array();
    for (const CatalogParam& p : e.params) {
      params += (params.empty() ? "" : " ") + p.key + (p.required ? "" : "?");
      jp.push_back(Json{{"key", p.key}, {"description", p.description}, {"required", p.required}});
    }
    std::snprintf(line, sizeof line, "%-16s %-20s %-44s %s\n", e.name.c_str(), params.c_str(), e.declared_pair.c_str(),
                  e.declared_holder.c_str());
    text << line;
    Json j{{"name", e.name}, {"formula", e.formula}, {"params", jp}, {"declared_pair", e.declared_pair},
           {"declared_alpha", e.declared_holder}};
    if (e.only_dimension) j["only_dimension"] = *e.only_dimension;
    entries.push_back(std::move(j));
  }
  result.report["catalog"] = std::move(entries);
  result.summary = text.str();
  return result;
}

CommandResult cmd_analyze(const RunConfig& config) {
  config.validate();
  MappingSpec map = resolve_map(config);
  Verdicts verdicts;
  const std::set<std::string> all(suite_names().begin(), suite_names().end());
  const Analysis a = analyze_map(std::move(map), config, all, derive_seed(config.seed, 0), false, verdicts);

  CommandResult result;
  result.report = report_header(config);
  result.report["map"] = a.label;
  result.report["domain"] = to_json(a.map.domain);
  result.report["pair"] = pair_json(a.pair);
  result.report["pair"]["source"] = a.pair_source;
  result.report["checks"] = verdicts.checks;
  result.report["profile"] = profile_json(*a.profile, &*a.monotone);
  result.report["frontier"] = to_json(*a.frontier);
  const HolderPrediction pred = predicted_exponent(a.pair);
  Json prediction = to_json(pred);
  prediction["alpha_hat"] = number(a.holder->alpha_hat);
  prediction["L_hat"] = number(a.holder->L_hat);
  if (a.map.declared_holder) prediction["declared_alpha"] = number(*a.map.declared_holder);
  result.report["prediction"] = std::move(prediction);
  result.exit_code = verdicts.exit_code();
  result.report["pass"] = verdicts.failed.empty();
  result.report["exit_code"] = result.exit_code;
  result.csv = profile_csv(*a.profile, &*a.monotone);

  std::ostringstream text;
  text << "map " << a.label << "  pair (" << format_number(a.pair.k1()) << ", " << format_number(a.pair.k2()) << ") "
       << a.pair_source << "\n";
  text << "fitted minimal K1 at K2 = 0: " << format_number(a.frontier->minimal_k1(0.0)) << "\n";
  text << "alpha_hat " << format_number(a.holder->alpha_hat) << "  predicted " << to_string(pred.cls);
  if (pred.cls != HolderClass::any_below_one) text << " " << format_number(pred.value);
  text << "\n" << verdicts.summary();
  result.summary = text.str();
  return result;
}

CommandResult cmd_verify(const RunConfig& config) {
  config.validate();
  const std::set<std::string> wanted = expand_suites(config.suites);
  Verdicts verdicts;
  CommandResult result;
  result.report = report_header(config);
  Json maps = Json::array();

  if (config.map || config.grid) {
    const Analysis a = analyze_map(resolve_map(config), config, wanted, derive_seed(config.seed, 0), false, verdicts);
    maps.push_back(a.label);
    if (a.profile) {
      result.report["profile"] = profile_json(*a.profile, &*a.monotone);
      result.csv = profile_csv(*a.profile, &*a.monotone);
    }
  } else {
    if (config.csv) throw UsageError("--csv needs a single mapping (--map or --grid)");
    if (config.omega || config.compact || config.center || config.k1)
      throw UsageError("--omega, --compact, --center and --k1/--k2 need a single mapping");
    std::set<std::string> per_map = wanted;
    per_map.erase("equicontinuity");
    for (std::size_t i = 0; i < kSweepMaps.size(); ++i) {
      const auto [name, params] = parse_map_selector(kSweepMaps[i]);
      const Analysis a = analyze_map(catalog_lookup(name, params), config, per_map,
                                     derive_seed(config.seed, i), true, verdicts);
      maps.push_back(a.label);
    }
    if (wanted.contains("equicontinuity")) family_equicontinuity(config, verdicts);
  }
  result.report["maps"] = std::move(maps);
  result.report["checks"] = verdicts.checks;
  result.exit_code = verdicts.exit_code();
  result.report["summary"] = Json{{"total", verdicts.passed + verdicts.failed.size()},
                                  {"passed", verdicts.passed},
                                  {"failed", verdicts.failed},
                                  {"budget_exhausted", verdicts.exhausted}};
  result.report["pass"] = verdicts.failed.empty();
  result.report["exit_code"] = result.exit_code;
  result.summary = verdicts.summary();
  return result;
}

CommandResult cmd_fit(const RunConfig& config) {
  config.validate();
  std::vector<DistortionSample> samples;
  std::string source;
  if (config.samples_csv) {
    if (config.map || config.grid) throw UsageError("--samples-csv excludes --map and --grid");
    std::ifstream in(*config.samples_csv);
    if (!in) throw UsageError("cannot read '" + *config.samples_csv + "'");
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line[0] == '#') continue;
      if (row == 1 && (line[0] == 'a' || line[0] == 'A')) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw UsageError("row " + std::to_string(row) + ": expected a,b");
      try {
        DistortionSample s;
        s.a = std::stod(line.substr(0, comma));
        s.b = std::stod(line.substr(comma + 1));
        if (!std::isfinite(s.a) || !std::isfinite(s.b) || s.a < 0.0 || s.b < 0.0)
          throw UsageError("row " + std::to_string(row) + ": a and b must be finite and nonnegative");
        samples.push_back(s);
      } catch (const std::logic_error&) {
        throw UsageError("row " + std::to_string(row) + ": malformed number");
      }
    }
    source = *config.samples_csv;
  } else {
    const MappingSpec map = resolve_map(config);
    samples = guarded("frontier", [&] {
      return draw_distortion_samples(map, map.domain, config.samples, derive_seed(config.seed, 1));
    });
    source = map_label(map, config);
  }
  if (samples.empty()) throw UsageError("no samples to fit");
  const DistortionFrontier frontier = guarded("frontier", [&] { return fit_minimal_distortion(samples); });

  CommandResult result;
  result.report = report_header(config);
  result.report["source"] = source;
  result.report["sample_count"] = samples.size();
  result.report["frontier"] = to_json(frontier);

  std::vector<double> ks;
  for (const auto& b : frontier.breakpoints()) ks.push_back(b.k1);
  const double last = ks.empty() ? 1.0 : std::max(1.0, ks.back());
  for (int i = 0; i <= 200; ++i) ks.push_back(2.0 * last * i / 200.0);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::string csv = "K1,K2_min\n";
  for (double k : ks) csv += format_number(k) + "," + format_number(frontier.minimal_k2(k)) + "\n";
  result.csv = std::move(csv);

  std::ostringstream text;
  text << "fitted " << samples.size() << " samples from " << source << "\n";
  for (const auto& b : frontier.breakpoints())
    text << "  K1 " << format_number(b.k1) << "  K2_min " << format_number(b.k2) << "\n";
  text << "minimal K1 at K2 = 0: " << format_number(frontier.minimal_k1(0.0)) << "\n";
  result.summary = text.str();
  return result;
}

CommandResult cmd_grid_export(const RunConfig& config, const GridExportConfig& grid) {
  if (!config.map) throw UsageError("grid-export needs --map");
  const MappingSpec map = resolve_map(config);
  if (grid.shape.size() != map.n) throw UsageError("--shape must have one entry per dimension");
  DomainRegion box = DomainRegion::box(Vec(map.n, -1.0), Vec(map.n, 1.0));
  if (grid.box) {
    box = parse_region(*grid.box);
    if (box.kind() != DomainRegion::Kind::box || box.dim() != map.n) throw UsageError("--box must be a box region of dimension n");
  } else if (map.domain.kind() == DomainRegion::Kind::ball) {
    const double half = map.domain.radius() / std::sqrt(static_cast<double>(map.n)) * (1.0 - 1e-9);
    Vec lo = map.domain.center(), hi = map.domain.center();
    for (std::size_t i = 0; i < map.n; ++i) {
      lo[i] -= half;
      hi[i] += half;
    }
    box = DomainRegion::box(lo, hi);
  } else {
    box = map.domain;
  }
  GridMeta meta;
  meta.n = map.n;
  meta.shape = grid.shape;
  meta.origin = box.low();
  for (std::size_t i = 0; i < map.n; ++i) {
    if (grid.shape[i] < 2) throw UsageError("--shape entries must be at least 2");
    meta.spacing.push_back((box.high()[i] - box.low()[i]) / static_cast<double>(grid.shape[i] - 1));
  }
  const GridSamples samples = guarded("grid-export", [&] { return sample_on_grid(map, meta); });
  const std::filesystem::path csv_tmp = grid.csv_path + ".tmp", meta_tmp = grid.meta_path + ".tmp";
  write_grid(samples, csv_tmp, meta_tmp);
  std::filesystem::rename(csv_tmp, grid.csv_path);
  std::filesystem::rename(meta_tmp, grid.meta_path);

  CommandResult result;
  result.report = report_header(config);
  result.report["grid"] = Json{{"csv", grid.csv_path}, {"meta", grid.meta_path}, {"nodes", meta.node_count()},
                               {"box", to_json(box)}};
  result.summary = "wrote " + std::to_string(meta.node_count()) + " nodes of " + map_selector(map) + " to " +
                   grid.csv_path + " and " + grid.meta_path + "\n";
  return result;
}

void emit(const RunConfig& config, const CommandResult& result) {
  const std::string json = result.report.dump(2) + "\n";
  if (config.out && *config.out != "-") write_atomic(*config.out, json);
  if (config.csv && result.csv) write_atomic(*config.csv, *result.csv);
  if (config.out && *config.out == "-") {
    std::cout << json;
  } else {
    std::cout << result.summary;
  }
  std::cout.flush();
}

}  // namespace qrlab::cli
