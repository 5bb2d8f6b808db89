// Acceptance checks: one PASS/FAIL line per criterion.
// Usage: acceptance <cogrowth-cli> <data-dir> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cogrowth/pipeline.hpp"
#include "cogrowth/projection_axioms.hpp"
#include "cogrowth/spec_io.hpp"

using namespace cogrowth;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kF2GrowthTol = 0.01;
constexpr double kProductGrowthTol = 0.05;
constexpr double kPureExpMax = 1.5;
constexpr double kBoundaryTol = 0.02;
constexpr double kCogrowthMargin = 0.03;
constexpr std::uint64_t kMinAxiomSamples = 10'000;
constexpr std::uint64_t kMinZigzagTuples = 1'000;
constexpr double kHalfGrowthTol = 0.05;
constexpr double kSyntheticEpsTol = 0.01;

const double kLog3 = std::log(3.0);

fs::path g_cli, g_data, g_scratch;
int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << what << ": " << detail << std::endl;
  if (!pass) ++g_failures;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Group load_group(const std::string& name) { return Group(parse_group_spec(read_file((g_data / name).string()))); }

NormalSubgroupOracle load_oracle(const std::string& name, const Group& g) {
  return parse_oracle_spec(read_file((g_data / name).string()), g);
}

PipelineRun pipeline(const std::string& config) {
  const fs::path path = g_data / config;
  return run_pipeline(parse_pipeline_config(read_file(path.string()), path.parent_path().string()));
}

void criterion1() {
  bool ok = true;
  Group f2 = load_group("f2.group");
  ShellCensus c = shell_census(f2, 12, 1);
  for (int r = 0; r <= 12; ++r) ok &= c.cumulative[static_cast<std::size_t>(r)] == 2 * std::pow(3.0, r) - 1;
  Group prod = load_group("f2xf2.group");
  ShellCensus p = shell_census(prod, 6, 1);
  for (int r = 0; r <= 6; ++r) {
    const double b = 2 * std::pow(3.0, r) - 1;
    ok &= p.cumulative[static_cast<std::size_t>(r)] == b * b;
  }
  report(1, ok, "exact census oracle",
         "F2 |B_12| " + fmt(c.cumulative.back(), 0) + ", F2xF2 |B_6| " + fmt(p.cumulative.back(), 0));
}

void criterion2() {
  Group f2 = load_group("f2.group");
  ShellCensus c = shell_census(f2, 14, 1);
  GrowthReport r = growth_rate(c);
  Group prod = load_group("f2xf2.group");
  GrowthReport rp = growth_rate(shell_census(prod, 7, 1));
  PureExpCheck pe = purely_exponential_check(c, r.regression.delta);
  const bool ok = std::fabs(r.regression.delta - kLog3) <= kF2GrowthTol &&
                  std::fabs(rp.regression.delta - 2 * kLog3) <= kProductGrowthTol && pe.constant <= kPureExpMax;
  report(2, ok, "growth estimates",
         "delta(F2) " + fmt(r.regression.delta) + ", delta(F2xF2) " + fmt(rp.regression.delta) + ", constant " +
             fmt(pe.constant));
}

void criterion3() {
  Group prod = load_group("f2xf2.group");
  CogrowthRatio r = cogrowth_ratio(prod, load_oracle("f2xf2_first_factor.oracle", prod), 7);
  Axis axis = make_axis(prod, prod.make(Word{generator_letter(0)}, Word{}), prod.identity());
  ContractionOptions opt;
  opt.pair_budget = 300'000;
  ContractionMeasurement m = measure_contraction(prod, axis, 4, opt);
  const bool ok = std::fabs(r.ratio - 0.5) <= kBoundaryTol && !m.contracting;
  report(3, ok, "boundary counterexample",
         "ratio " + fmt(r.ratio) + ", axis (a,e) contracting " + (m.contracting ? "yes" : "no"));
}

void criterion4() {
  Group f2 = load_group("f2.group");
  bool ok = true;
  std::string detail;
  for (const char* name : {"z2", "z", "commutator", "z2_z3"}) {
    CogrowthRatio r = cogrowth_ratio(f2, load_oracle(std::string(name) + ".oracle", f2), 14);
    ok &= r.ratio > 0.5 + kCogrowthMargin;
    detail += (detail.empty() ? "" : ", ") + std::string(name) + " " + fmt(r.ratio);
  }
  report(4, ok, "cogrowth above one half", detail);
}

struct AxiomSummary {
  bool pass = true;
  std::string detail;
};

AxiomSummary axiom_suite(const Group& f2, const std::string& c) {
  AxiomSummary s;
  const Element root = elementary_closure_root(f2, f2.parse(c));
  AxisFamily family = axis_family(f2, root, 6);
  ProjectionTable table(f2, family);
  AxiomReport p0 = check_P0(family, table);
  AxiomReport p1 = check_P1(family, table, p0.theta);
  AxiomReport sp = check_SP(f2, family, table, p0.theta);
  for (const AxiomReport* r : {&p0, &p1, &sp})
    s.pass &= r->pass() && (r->exhaustive || r->sample_size >= kMinAxiomSamples) && r->sample_size > 0;

  std::uint64_t comparable = 0, agreeing = 0, violations = 0;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, family.axes.size() - 1);
  for (int t = 0; t < 200 && family.axes.size() > 1; ++t) {
    const std::size_t x = pick(rng), z = pick(rng);
    if (x == z) continue;
    OrderCheck oc = order_interval(f2, family.axes[x], family.axes[z], family.axes, p0.theta);
    comparable += oc.comparable_pairs;
    agreeing += oc.agreeing_pairs;
    violations += oc.violations.size();
  }
  s.pass &= violations == 0 && agreeing == comparable;
  s.detail = "c=" + c + " violations " + std::to_string(p0.violation_count + p1.violation_count + sp.violation_count) +
             " over " + std::to_string(p0.sample_size + p1.sample_size + sp.sample_size) + " tuples, order " +
             std::to_string(agreeing) + "/" + std::to_string(comparable);
  return s;
}

void criterion5(const PipelineRun& run_a, const PipelineRun& run_ab) {
  Group f2 = load_group("f2.group");
  AxiomSummary a = axiom_suite(f2, "a"), ab = axiom_suite(f2, "ab");
  bool ok = a.pass && ab.pass;
  std::string detail = a.detail + "; " + ab.detail;
  for (const PipelineRun* run : {&run_a, &run_ab}) {
    const bool compliant = run->stages_run && run->constants.checklist_pass();
    ok &= compliant && run->config.order_radius >= 6 && run->g2.order.checked > 0 && run->g2.order.pass();
    detail += "; G2-order c=" + run->config.c + " p=" + std::to_string(run->constants.p.value) + " " +
              std::to_string(run->g2.order.checked - run->g2.order.failed) + "/" +
              std::to_string(run->g2.order.checked);
  }
  report(5, ok, "projection axioms and order", detail);
}

void criterion6(const PipelineRun& run) {
  bool ok = run.stages_run && run.constants.p.value >= 4 && run.config.r_max == 12;
  ok &= run.g2.sandwich.pass() && run.g2.sandwich.checked == run.g1.set.size();
  ok &= run.g3.separation.pass() && run.g3.same_axis.pass();
  ok &= run.injection.k_max <= 2 && run.injection.norm_budget == 10 && run.injection.collisions.pass() &&
        run.injection.tuples > 0;
  ok &= run.zigzag.base.pass() && run.zigzag.inductive.pass() && run.zigzag.base.checked >= kMinZigzagTuples &&
        run.zigzag.inductive.checked >= kMinZigzagTuples;
  report(6, ok, "pipeline lemma assertions",
         "sandwich " + std::to_string(run.g2.sandwich.failed) + "/" + std::to_string(run.g2.sandwich.checked) +
             ", separation " + std::to_string(run.g3.separation.failed) + "/" +
             std::to_string(run.g3.separation.checked) + ", collisions " +
             std::to_string(run.injection.collisions.failed) + " over " + std::to_string(run.injection.tuples) +
             ", zigzag " + std::to_string(run.zigzag.base.failed + run.zigzag.inductive.failed) + "/" +
             std::to_string(run.zigzag.base.checked + run.zigzag.inductive.checked));
}

void criterion7(const PipelineRun& run) {
  const double d4 = run.g4_rate ? run.g4_rate->regression.delta : NAN;
  const bool delta_ok = std::fabs(d4 - kLog3 / 2) <= kHalfGrowthTol;
  const bool stated = run.g4.admissible_reachable || !run.g4.survival_rule.empty();
  const bool ok = run.stages_run && delta_ok && run.g4.survival_pass && stated;
  report(7, ok, "half growth of the filtered family",
         "delta(G4) " + fmt(d4) + " vs " + fmt(kLog3 / 2) + ", survival " + (run.g4.survival_pass ? "pass" : "fail") +
             " (" + run.g4.survival_rule + ")");
}

void criterion8(const PipelineRun& run) {
  const double delta = 0.55;
  const long c2p = 10;
  const int R = 1000;
  std::vector<double> counts;
  for (int r = 0; r <= R; ++r) counts.push_back(std::exp(delta * r));
  EpsilonCertificate synth = cogrowth_lower_bound(census_from_counts(counts, 1), delta, c2p);
  auto gap = [&](double eps) {
    const double q = std::exp(-eps);
    return std::log((1 - std::pow(q, R + 1)) / (1 - q)) - (delta + eps) * c2p;
  };
  double lo = 1e-9, hi = kEpsilonMax;
  for (int i = 0; i < 200; ++i) ((gap((lo + hi) / 2) >= 0) ? lo : hi) = (lo + hi) / 2;
  const bool synth_ok =
      synth.verdict == CertificateVerdict::certified && std::fabs(synth.epsilon - lo) <= kSyntheticEpsTol;
  const bool run_ok = run.stages_run && run.certificate.verdict == CertificateVerdict::certified &&
                      run.certificate.epsilon > 0;
  report(8, synth_ok && run_ok, "divergence certificate",
         "F2 run " + to_string(run.certificate.verdict) + " (log partial sum " +
             fmt(run.certificate.log_partial_sum, 2) + " vs " + fmt(run.certificate.log_threshold, 2) +
             "), synthetic epsilon " + fmt(synth.epsilon) + " vs " + fmt(lo));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs one command into two directories and compares every file.
bool identical_runs(const std::string& name, const std::string& args, std::string& detail) {
  std::vector<fs::path> dirs;
  std::vector<int> codes;
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = g_scratch / (name + "_" + std::to_string(i));
    fs::remove_all(dir);
    const std::string cmd =
        "\"" + g_cli.string() + "\" " + args + " --out \"" + dir.string() + "\" > \"" + dir.string() + ".log\" 2>&1";
    codes.push_back(std::system(cmd.c_str()));
    dirs.push_back(dir);
  }
  std::vector<std::string> files;
  if (fs::exists(dirs[0]))
    for (const auto& e : fs::directory_iterator(dirs[0])) files.push_back(e.path().filename().string());
  bool ok = !files.empty() && codes[0] == codes[1];
  for (const auto& f : files) ok &= fs::exists(dirs[1] / f) && slurp(dirs[0] / f) == slurp(dirs[1] / f);
  std::size_t second = 0;
  if (fs::exists(dirs[1])) second = static_cast<std::size_t>(std::distance(fs::directory_iterator(dirs[1]), {}));
  ok &= second == files.size();
  detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(files.size()) + " files " +
            (ok ? "identical" : "differ");
  return ok;
}

void criterion9() {
  fs::create_directories(g_scratch);
  const std::string d = g_data.string();
  std::string detail;
  bool ok = true;
  ok &= identical_runs("growth", "growth --group \"" + d + "/f2.group\" --radius 10 --oracle \"" + d + "/z.oracle\"",
                       detail);
  ok &= identical_runs("cogrowth",
                       "cogrowth --group \"" + d + "/f2.group\" --oracle \"" + d + "/commutator.oracle\" --radius 12",
                       detail);
  ok &= identical_runs("pipeline", "pipeline --config \"" + d + "/pipeline_a.cfg\"", detail);
  ok &= identical_runs("axioms", "axioms --group \"" + d + "/f2.group\" --c ab --radius 5", detail);
  report(9, ok, "determinism", detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <cogrowth-cli> <data-dir> <scratch-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_scratch = argv[3];
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    const PipelineRun run_a = pipeline("pipeline_a.cfg");
    const PipelineRun run_ab = pipeline("pipeline_ab.cfg");
    criterion5(run_a, run_ab);
    criterion6(run_ab);
    criterion7(run_ab);
    criterion8(run_ab);
    criterion9();
  } catch (const std::exception& e) {
    std::cout << "FAIL aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (g_failures == 0 ? "all criteria pass" : std::to_string(g_failures) + " criteria fail") << std::endl;
  return g_failures == 0 ? 0 : 1;
}
