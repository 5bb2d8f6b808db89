#include "cogrowth/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cogrowth/errors.hpp"

namespace cogrowth {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // no negative zero
  return r;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

void write_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ResourceError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ResourceError("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json count(double v) {
  if (v >= 0 && v < 9.2e18) return static_cast<std::uint64_t>(std::llround(v));
  return number(v);
}

std::string count_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f", v);
  return buf;
}

Json words(const std::vector<std::string>& ws) { return Json(ws); }

Json to_json(const Witness& w) {
  Json j;
  j["check"] = w.check;
  j["words"] = words(w.words);
  j["values"] = w.values;
  return j;
}

Json to_json(const SurvivalShell& s) {
  Json j;
  j["lo"] = s.lo;
  j["G3"] = s.g3;
  j["G4"] = s.g4;
  j["fraction"] = number(s.fraction());
  j["admissible"] = s.admissible;
  return j;
}

Json ledger(const LedgerValue& v) {
  Json j;
  j["value"] = v.value;
  j["provenance"] = to_string(v.provenance);
  return j;
}

Json optional_rate(const std::optional<GrowthReport>& r) { return r ? to_json(*r) : Json(nullptr); }

}  // namespace

std::string census_csv(const ShellCensus& census) {
  std::string out = "radius,count,cumulative\n";
  for (std::size_t i = 0; i < census.size(); ++i) {
    out += std::to_string(static_cast<long>(i) * census.delta);
    out += ',' + count_text(census.counts[i]) + ',' + count_text(census.cumulative[i]) + '\n';
  }
  return out;
}

Json to_json(const ShellCensus& census) {
  Json j;
  j["delta"] = census.delta;
  j["provenance"] = "measured";
  Json counts = Json::array(), cumulative = Json::array();
  for (std::size_t i = 0; i < census.size(); ++i) {
    counts.push_back(count(census.counts[i]));
    cumulative.push_back(count(census.cumulative[i]));
  }
  j["counts"] = std::move(counts);
  j["cumulative"] = std::move(cumulative);
  return j;
}

Json to_json(const GrowthEstimate& e) {
  Json j;
  j["delta"] = number(e.delta);
  j["estimator"] = to_string(e.estimator);
  j["window"] = Json::array({e.window_lo, e.window_hi});
  j["residual"] = number(e.residual);
  j["pure_exp_constant"] = number(e.pure_exp_constant);
  j["provenance"] = "measured";
  return j;
}

Json to_json(const GrowthReport& r) {
  Json j;
  j["slope_regression"] = to_json(r.regression);
  j["shell_ratio"] = to_json(r.shell_ratio);
  return j;
}

Json to_json(const Group& group, const AxiomReport& r) {
  Json j;
  j["axiom"] = r.axiom;
  j["theta"] = r.theta;
  j["theta_prime"] = r.theta_prime;
  j["sample_size"] = r.sample_size;
  j["conditional_checks"] = r.conditional_checks;
  j["exhaustive"] = r.exhaustive;
  j["violation_count"] = r.violation_count;
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json w;
    w["axiom"] = x.axiom;
    Json ws = Json::array();
    for (const Element& e : x.witness) ws.push_back(group.format(e));
    w["witness"] = std::move(ws);
    w["values"] = x.values;
    v.push_back(std::move(w));
  }
  j["violations"] = std::move(v);
  if (r.maximizer) j["maximizer"] = Json::array({group.format(r.maximizer->first), group.format(r.maximizer->second)});
  j["pass"] = r.pass();
  return j;
}

Json to_json(const CheckOutcome& c) {
  Json j;
  j["name"] = c.name;
  j["checked"] = c.checked;
  j["failed"] = c.failed;
  j["pass"] = c.pass();
  Json w = Json::array();
  for (const auto& x : c.witnesses) w.push_back(to_json(x));
  j["witnesses"] = std::move(w);
  return j;
}

Json to_json(const PipelineConstants& k) {
  Json j;
  j["C"] = ledger(k.C);
  j["C_prime"] = ledger(k.C_prime);
  j["theta"] = ledger(k.theta);
  j["theta_prime"] = ledger(k.theta_prime);
  j["K"] = ledger(k.K);
  j["D"] = ledger(k.D);
  j["p"] = ledger(k.p);
  j["Delta"] = k.Delta;
  j["measurement_radius"] = k.measurement_radius;
  j["f0_norm"] = k.f0_norm;
  j["c_norm"] = k.c_norm;
  j["c_p_norm"] = k.c_p_norm;
  j["E"] = k.E;
  j["Delta_prime"] = k.Delta_prime;
  Json items = Json::array();
  for (const auto& i : k.checklist) {
    Json it;
    it["name"] = i.name;
    it["lhs"] = i.lhs;
    it["rhs"] = i.rhs;
    it["strict"] = i.strict;
    it["pass"] = i.pass;
    items.push_back(std::move(it));
  }
  j["checklist"] = std::move(items);
  j["checklist_pass"] = k.checklist_pass();
  return j;
}

Json to_json(const EpsilonCertificate& c) {
  Json j;
  j["delta"] = number(c.delta);
  j["epsilon"] = number(c.epsilon);
  j["grid_step"] = number(c.grid_step);
  j["grid_max"] = number(kEpsilonMax);
  j["log_partial_sum"] = number(c.log_partial_sum);
  j["log_threshold"] = number(c.log_threshold);
  j["verdict"] = to_string(c.verdict);
  return j;
}

Json to_json(const PipelineRun& run) {
  const Group group(run.config.group);
  const PipelineConfig& cfg = run.config;
  Json j;
  Json conf;
  conf["c"] = cfg.c;
  conf["r_max"] = cfg.r_max;
  conf["k_max"] = cfg.k_max;
  conf["norm_budget"] = cfg.norm_budget;
  conf["measurement_radius"] = cfg.measurement_radius;
  conf["order_radius"] = cfg.order_radius;
  conf["f0_radius"] = cfg.f0_radius;
  conf["zigzag_samples"] = cfg.zigzag_samples;
  conf["zigzag_k_max"] = cfg.zigzag_k_max;
  conf["seed"] = cfg.seed;
  j["config"] = std::move(conf);
  j["c"] = {{"input", cfg.c}, {"cyclic_core", group.format(run.c)}, {"root", group.format(run.root)}};

  Json m;
  m["contraction"] = {{"C", run.contraction.C},
                      {"per_radius", run.contraction.per_radius},
                      {"contracting", run.contraction.contracting},
                      {"exhaustive", run.contraction.exhaustive},
                      {"pairs", run.contraction.pairs},
                      {"provenance", "measured"}};
  m["bgi"] = {{"C_prime", run.bgi.C_prime},
              {"found", run.bgi.found},
              {"exhaustive", run.bgi.exhaustive},
              {"geodesics", run.bgi.geodesics},
              {"corollary_checks", run.bgi.corollary_checks},
              {"corollary_violations", run.bgi.corollary_violations},
              {"provenance", "measured"}};
  m["P0"] = to_json(group, run.p0);
  j["measurements"] = std::move(m);
  j["constants"] = to_json(run.constants);
  j["f0"] = {{"f0", group.format(run.f0.f0)},
             {"method", run.f0.method},
             {"diam_at_f0_axis", run.f0.diam_at_f0_axis},
             {"diam_at_base_axis", run.f0.diam_at_base_axis},
             {"within_C", run.f0.within_C}};
  j["stages_run"] = run.stages_run;
  if (!run.stages_run) {
    j["exit_code"] = run.exit_code();
    return j;
  }

  Json st;
  st["G1"] = {{"size", run.g1.set.size()},
              {"radius", run.g1.radius},
              {"phi0", {{"domain_radius", run.g1.phi0_domain_radius},
                        {"domain", run.g1.phi0_domain},
                        {"fixed", run.g1.phi0_fixed},
                        {"max_fiber", run.g1.phi0_max_fiber},
                        {"max_displacement", run.g1.phi0_max_displacement}}}};
  st["G2"] = {{"size", run.g2.set.size()},
              {"max_fiber", run.g2.max_fiber},
              {"max_fiber_spread", run.g2.max_fiber_spread}};
  st["G3"] = {{"size", run.g3.set.size()},
              {"max_fiber", run.g3.max_fiber},
              {"max_displacement", run.g3.max_displacement},
              {"bucket_pairs", run.g3.bucket_pairs}};
  Json shells = Json::array(), unit = Json::array();
  for (const auto& s : run.g4.shells) shells.push_back(to_json(s));
  const std::size_t n = run.g4.unit_shells.size();
  for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) unit.push_back(to_json(run.g4.unit_shells[i]));
  Json shadows = Json::array();
  for (const auto& w : run.g4.shadow_witnesses) shadows.push_back(to_json(w));
  st["G4"] = {{"size", run.g4.set.size()},
              {"removed", run.g4.removed},
              {"survival", {{"rule", run.g4.survival_rule},
                            {"admissible_reachable", run.g4.admissible_reachable},
                            {"threshold", 7 * run.constants.c_p_norm},
                            {"pass", run.g4.survival_pass},
                            {"shells", std::move(shells)},
                            {"top_unit_shells", std::move(unit)}}},
              {"shadow_witnesses", std::move(shadows)}};
  j["stages"] = std::move(st);

  j["censuses"] = {{"max_norm", run.census_max_norm},
                   {"group", to_json(run.group_census)},
                   {"G3", to_json(run.g3_census)},
                   {"G4", to_json(run.g4_census)}};
  const double dg = run.group_rate ? run.group_rate->regression.delta : NAN;
  const double d4 = run.g4_rate ? run.g4_rate->regression.delta : NAN;
  j["estimates"] = {{"group", optional_rate(run.group_rate)},
                    {"G3", optional_rate(run.g3_rate)},
                    {"G4", optional_rate(run.g4_rate)},
                    {"half_group_delta", number(dg / 2)},
                    {"G4_minus_half_group", number(d4 - dg / 2)}};
  j["injection"] = {{"k_max", run.injection.k_max},
                    {"norm_budget", run.injection.norm_budget},
                    {"generators", run.injection.generators},
                    {"tuples", run.injection.tuples},
                    {"tuples_by_length", run.injection.tuples_by_length},
                    {"collisions", run.injection.collisions.failed}};
  j["zigzag"] = {{"tuples", run.zigzag.tuples}, {"k_max", run.zigzag.k_max}};
  Json cert = to_json(run.certificate);
  const bool certified = run.certificate.verdict == CertificateVerdict::certified;
  cert["ratio_lower_bound"] = certified ? number((d4 + run.certificate.epsilon) / dg) : Json(nullptr);
  cert["certifies_ratio_above_half"] = certified;
  j["certificate"] = std::move(cert);
  Json checks = Json::array();
  for (const CheckOutcome* c : run.hard_checks()) checks.push_back(to_json(*c));
  j["hard_checks"] = std::move(checks);
  j["exit_code"] = run.exit_code();
  return j;
}

}  // namespace cogrowth
