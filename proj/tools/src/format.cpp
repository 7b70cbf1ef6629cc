#include "qrlab_cli/format.hpp"

#include <cmath>
#include <fstream>

#include "qrlab/error.hpp"
#include "qrlab_cli/config.hpp"

namespace qrlab::cli {

std::string format_number(double v) { return Json(v).dump(); }

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json to_json(const QuadratureResult& q) {
  Json j;
  j["value"] = number(q.value);
  j["error"] = number(q.error_estimate);
  j["evaluations"] = q.evaluations;
  j["method"] = to_string(q.method);
  if (q.method == QuadratureMethod::monte_carlo) j["seed"] = q.seed;
  if (q.budget_exhausted) j["budget_exhausted"] = true;
  return j;
}

Json to_json(const DomainRegion& region) {
  Json j;
  if (region.kind() == DomainRegion::Kind::ball) {
    j["kind"] = "ball";
    j["center"] = region.center();
    j["radius"] = number(region.radius());
  } else {
    j["kind"] = "box";
    j["low"] = region.low();
    j["high"] = region.high();
  }
  return j;
}

Json to_json(const CheckReport& report) {
  Json j;
  j["check"] = report.check;
  Json rows = Json::array();
  for (const RadiusCheck& r : report.per_radius) {
    Json row;
    row["r"] = number(r.r);
    row["lhs"] = number(r.lhs);
    row["rhs"] = number(r.rhs);
    row["slack"] = number(r.slack);
    row["tolerance"] = number(r.tolerance);
    row["pass"] = r.pass;
    if (r.skipped) row["skipped"] = true;
    if (r.abs_form_slack) row["abs_form_slack"] = number(*r.abs_form_slack);
    rows.push_back(std::move(row));
  }
  j["per_radius"] = std::move(rows);
  j["worst_slack"] = number(report.worst_slack);
  j["pass"] = report.pass;
  if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
  return j;
}

Json to_json(const DistortionFrontier& frontier) {
  Json j;
  Json bps = Json::array();
  for (const auto& b : frontier.breakpoints()) bps.push_back(Json{{"k1", number(b.k1)}, {"k2", number(b.k2)}});
  j["breakpoints"] = std::move(bps);
  Json pieces = Json::array();
  for (const auto& p : frontier.pieces()) {
    pieces.push_back(Json{{"k1_begin", number(p.k1_begin)},
                          {"k1_end", number(p.k1_end)},
                          {"intercept", number(p.intercept)},
                          {"slope", number(-p.slope_a)},
                          {"sample", p.sample}});
  }
  j["pieces"] = std::move(pieces);
  j["minimal_k1_at_k2_zero"] = number(frontier.minimal_k1(0.0));
  j["contributing_samples"] = frontier.contributing_samples();
  return j;
}

Json to_json(const HolderPrediction& prediction) {
  Json j;
  j["class"] = to_string(prediction.cls);
  if (prediction.cls == HolderClass::any_below_one) {
    j["alpha"] = "any positive number less than 1";
  } else {
    j["alpha"] = number(prediction.value);
  }
  j["k1"] = number(prediction.source.k1());
  j["k2"] = number(prediction.source.k2());
  return j;
}

Json to_json(const GrowthBound& bound) {
  Json j;
  j["case"] = bound.case_id;
  j["C"] = number(bound.C);
  j["growth_exponent"] = number(bound.growth_exponent);
  j["holder_exponent"] = number(bound.holder_exponent);
  j["validity_radius"] = number(bound.validity_radius);
  j["inputs"] = Json{{"k1", number(bound.inputs.k1)},
                     {"k2", number(bound.inputs.k2)},
                     {"energy", number(bound.inputs.energy)},
                     {"d", number(bound.inputs.d)},
                     {"n", bound.inputs.n}};
  if (bound.inputs.target_alpha) j["inputs"]["target_alpha"] = number(*bound.inputs.target_alpha);
  j["note"] = "growth condition read as w(a, r) <= C r^(n alpha) with Hoelder exponent alpha";
  return j;
}

Json to_json(const HolderEstimate& e) {
  Json j;
  j["alpha_used"] = number(e.alpha_used);
  j["alpha_hat"] = number(e.alpha_hat);
  j["L_hat"] = number(e.L_hat);
  j["L_hat_G"] = number(e.L_hat_G);
  j["L_hat_H"] = number(e.L_hat_H);
  j["pair_count"] = e.pair_count;
  j["skipped_pairs"] = e.skipped_pairs;
  j["compact_set"] = to_json(e.compact_set);
  j["d"] = number(e.d);
  j["gamma"] = number(e.gamma);
  j["flagged"] = e.flagged;
  Json bins = Json::array();
  for (const HolderBin& b : e.bins) {
    bins.push_back(Json{{"sep_lo", number(b.sep_lo)},
                        {"sep_hi", number(b.sep_hi)},
                        {"pairs", b.pairs},
                        {"max_increment", number(b.max_increment)},
                        {"sep_at_max", number(b.sep_at_max)},
                        {"in_regression", b.in_regression}});
  }
  j["bins"] = std::move(bins);
  return j;
}

Json to_json(const EquicontinuityReport& r) {
  Json j;
  j["energy_bound"] = number(r.energy_bound);
  j["alpha_min"] = number(r.alpha_min);
  j["L_shared"] = number(r.L_shared);
  j["L_empirical"] = number(r.L_empirical);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"scale", number(row.scale)},
                        {"mu", number(row.mu)},
                        {"bound", number(row.bound)},
                        {"worst_member", row.worst_member},
                        {"pass", row.pass}});
  }
  j["rows"] = std::move(rows);
  Json energies = Json::array();
  for (double e : r.member_energies) energies.push_back(number(e));
  j["member_energies"] = std::move(energies);
  j["refused_members"] = r.refused_members;
  j["monotone"] = r.monotone;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const DifferentiabilityReport& r) {
  Json j;
  j["point"] = r.point;
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    rows.push_back(Json{{"r", number(r.radii[i])}, {"beta_hat", number(r.beta_hat[i])}});
  j["probes"] = std::move(rows);
  j["differential_norm"] = number(r.differential_norm);
  j["roundoff_regime"] = r.roundoff_regime;
  j["pass"] = r.pass;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

Json profile_json(const RadialProfile& profile, const MonotoneProfile* monotone) {
  Json j;
  j["center"] = profile.center;
  j["n"] = profile.n;
  Json rows = Json::array();
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    Json row;
    row["r"] = number(profile.radii[i]);
    row["w"] = number(profile.w[i].value);
    row["w_err"] = number(profile.w[i].error_estimate);
    row["s"] = number(profile.s[i].value);
    row["s_err"] = number(profile.s[i].error_estimate);
    row["jint"] = number(profile.jacobian_integral[i].value);
    row["jint_err"] = number(profile.jacobian_integral[i].error_estimate);
    if (monotone) {
      row["v"] = number(monotone->v[i]);
      row["v_err"] = number(monotone->v_err[i]);
    }
    if (profile.has_monte_carlo()) {
      row["w_mc"] = number(profile.w_mc[i].value);
      row["w_mc_err"] = number(profile.w_mc[i].error_estimate);
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (!profile.w.empty()) {
    j["methods"] = Json{{"w", to_string(profile.w.front().method)},
                        {"s", to_string(profile.s.front().method)},
                        {"jint", to_string(profile.jacobian_integral.front().method)}};
  }
  return j;
}

std::string profile_csv(const RadialProfile& profile, const MonotoneProfile* monotone) {
  std::string out = monotone ? "r,w,w_err,s,s_err,jint,jint_err,v,v_err\n" : "r,w,w_err,s,s_err,jint,jint_err\n";
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    out += format_number(profile.radii[i]);
    for (double v : {profile.w[i].value, profile.w[i].error_estimate, profile.s[i].value, profile.s[i].error_estimate,
                     profile.jacobian_integral[i].value, profile.jacobian_integral[i].error_estimate})
      out += "," + format_number(v);
    if (monotone) out += "," + format_number(monotone->v[i]) + "," + format_number(monotone->v_err[i]);
    out += "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw UsageError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw UsageError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace qrlab::cli
