// Command-line front end: growth, cogrowth, pipeline and axioms reports.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "cogrowth/errors.hpp"
#include "cogrowth/report.hpp"
#include "cogrowth/spec_io.hpp"

using namespace cogrowth;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kRadius = 3, kHard = 4, kConstants = 5 };

// Tolerance on |ratio - 1/2| for the boundary verdict.
constexpr double kBoundaryTolerance = 0.02;

struct Input {
  std::string path;
  std::string text;
};

Input load(const std::string& path) { return {path, read_file(path)}; }

Json input_json(const Input& in) { return {{"path", in.path}, {"digest", digest(in.text)}}; }

Json group_json(const GroupSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["ranks"] = spec.ranks;
  j["radius_bound"] = spec.radius_bound;
  return j;
}

Json header(const std::string& command, Json args) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = {{"name", command}, {"args", std::move(args)}};
  return j;
}

void emit(const std::string& dir, const std::string& name, std::string_view content) {
  fs::create_directories(dir);
  write_atomic((fs::path(dir) / name).string(), content);
}

std::string fixed(double v, int digits = 6) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// A cyclic axis of the first generator; for products, of (a, e).
Json contraction_probe(const Group& group, int radius) {
  const Element root = group.is_product() ? group.make(Word{generator_letter(0)}, Word{}) : group.make(Word{generator_letter(0)});
  Axis axis = make_axis(group, root, group.identity());
  ContractionOptions opt;
  opt.pair_budget = 300'000;
  ContractionMeasurement m = measure_contraction(group, axis, radius, opt);
  Json j;
  j["axis"] = group.format(root);
  j["radius"] = radius;
  j["C"] = m.C;
  j["per_radius"] = m.per_radius;
  j["contracting"] = m.contracting;
  j["exhaustive"] = m.exhaustive;
  j["provenance"] = "measured";
  return j;
}

int cmd_growth(const std::string& group_path, int radius, int delta, const std::string& oracle_path,
               const std::string& out) {
  const Input gin = load(group_path);
  Group group(parse_group_spec(gin.text));
  std::optional<NormalSubgroupOracle> oracle;
  std::optional<Input> oin;
  if (!oracle_path.empty()) {
    oin = load(oracle_path);
    oracle = parse_oracle_spec(oin->text, group);
  }
  ShellCensus census = shell_census(group, radius, delta, oracle ? &*oracle : nullptr);
  GrowthReport rate = growth_rate(census);

  Json args;
  args["group"] = group_path;
  args["radius"] = radius;
  args["delta"] = delta;
  args["oracle"] = oracle_path.empty() ? Json(nullptr) : Json(oracle_path);
  Json j = header("growth", std::move(args));
  j["inputs"] = {{"group", input_json(gin)}, {"oracle", oin ? input_json(*oin) : Json(nullptr)}};
  j["group"] = group_json(group.spec());
  j["census"] = to_json(census);
  j["estimate"] = to_json(rate);
  PureExpCheck pe = purely_exponential_check(census, rate.regression.delta);
  j["purely_exponential"] = {{"purely_exponential", pe.purely_exponential}, {"constant", number(pe.constant)}};
  emit(out, "census.csv", census_csv(census));
  emit(out, "growth.json", dump(j));
  std::cout << "delta " << fixed(rate.regression.delta) << " (shell ratio " << fixed(rate.shell_ratio.delta) << ")\n";
  return kOk;
}

int cmd_cogrowth(const std::string& group_path, const std::string& oracle_path, int radius, const std::string& out) {
  const Input gin = load(group_path), oin = load(oracle_path);
  Group group(parse_group_spec(gin.text));
  NormalSubgroupOracle oracle = parse_oracle_spec(oin.text, group);
  CogrowthRatio r = cogrowth_ratio(group, oracle, radius);
  const double ratio = r.ratio;
  const std::string verdict = std::fabs(ratio - 0.5) <= kBoundaryTolerance ? "boundary" : ratio > 0.5 ? "yes" : "no";

  Json args;
  args["group"] = group_path;
  args["oracle"] = oracle_path;
  args["radius"] = radius;
  Json j = header("cogrowth", std::move(args));
  j["inputs"] = {{"group", input_json(gin)}, {"oracle", input_json(oin)}};
  j["group"] = group_json(group.spec());
  j["oracle_kind"] = to_string(oracle.kind());
  j["censuses"] = {{"group", to_json(r.group)}, {"subgroup", to_json(r.subgroup)}};
  j["estimates"] = {{"group", to_json(r.group_rate)}, {"subgroup", to_json(r.subgroup_rate)}};
  j["ratio"] = number(ratio);
  j["boundary_tolerance"] = number(kBoundaryTolerance);
  j["verdict"] = verdict;
  if (group.is_free() || group.is_product()) j["contraction_probe"] = contraction_probe(group, group.is_product() ? 4 : 6);
  emit(out, "census_group.csv", census_csv(r.group));
  emit(out, "census_subgroup.csv", census_csv(r.subgroup));
  emit(out, "cogrowth.json", dump(j));
  std::cout << "delta_N " << fixed(r.subgroup_rate.regression.delta) << " delta_G " << fixed(r.group_rate.regression.delta)
            << " ratio " << fixed(ratio) << "\n";
  std::cout << "ratio > 1/2: " << verdict << "\n";
  if (group.is_product() && !j["contraction_probe"]["contracting"].get<bool>())
    std::cout << "note: factor axis " << j["contraction_probe"]["axis"].get<std::string>()
              << " is not strongly contracting\n";
  return kOk;
}

int cmd_pipeline(const std::string& config_path, const std::string& out) {
  const Input cin = load(config_path);
  PipelineConfig cfg = parse_pipeline_config(cin.text, fs::path(config_path).parent_path().string());
  const Input gin = load(cfg.group_path);
  PipelineRun run = run_pipeline(cfg);

  Json args;
  args["config"] = config_path;
  Json j = header("pipeline", std::move(args));
  j["inputs"] = {{"config", input_json(cin)}, {"group", input_json(gin)}};
  Json body = to_json(run);
  for (auto& [k, v] : body.items()) j[k] = v;
  if (run.stages_run) {
    emit(out, "census_group.csv", census_csv(run.group_census));
    emit(out, "census_G3.csv", census_csv(run.g3_census));
    emit(out, "census_G4.csv", census_csv(run.g4_census));
  }
  emit(out, "pipeline.json", dump(j));

  const auto& k = run.constants;
  std::cout << "K " << k.K.value << " D " << k.D.value << " p " << k.p.value << " |c^p| " << k.c_p_norm << "\n";
  for (const auto& item : k.checklist)
    if (!item.pass) std::cout << "checklist failed: " << item.name << " (" << item.lhs << " vs " << item.rhs << ")\n";
  if (run.stages_run) {
    std::cout << "G1 " << run.g1.set.size() << " G2 " << run.g2.set.size() << " G3 " << run.g3.set.size() << " G4 "
              << run.g4.set.size() << "\n";
    for (const CheckOutcome* c : run.hard_checks())
      std::cout << (c->pass() ? "ok   " : "FAIL ") << c->name << " " << c->failed << "/" << c->checked << "\n";
    std::cout << "collisions " << run.injection.collisions.failed << " over " << run.injection.tuples << " tuples\n";
    std::cout << "survival: " << run.g4.survival_rule << ": " << (run.g4.survival_pass ? "pass" : "fail") << "\n";
    std::cout << "certificate " << to_string(run.certificate.verdict) << " epsilon " << fixed(run.certificate.epsilon, 4)
              << "\n";
  }
  std::cout << "exit " << run.exit_code() << "\n";
  return run.exit_code();
}

int cmd_axioms(const std::string& group_path, const std::string& c, int radius, std::uint64_t samples,
               std::uint64_t seed, const std::string& out) {
  const Input gin = load(group_path);
  Group group(parse_group_spec(gin.text));
  group.check_radius(radius);
  const Element root = elementary_closure_root(group, group.parse(c));
  AxisFamily family = axis_family(group, root, radius);
  ProjectionTable table(group, family);
  AxiomOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  AxiomReport p0 = check_P0(family, table);
  AxiomReport p1 = check_P1(family, table, p0.theta, opt);
  AxiomReport sp = check_SP(group, family, table, p0.theta, opt);

  // Order intervals between sampled pairs of the family.
  std::uint64_t intervals = 0, comparable = 0, agreeing = 0, monotone = 0, order_violations = 0;
  std::size_t longest = 0;
  Json order_witnesses = Json::array();
  if (family.axes.size() > 1) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, family.axes.size() - 1);
    for (int t = 0; t < 200; ++t) {
      const std::size_t x = pick(rng), z = pick(rng);
      if (x == z) continue;
      OrderCheck oc = order_interval(group, family.axes[x], family.axes[z], family.axes, p0.theta);
      ++intervals;
      comparable += oc.comparable_pairs;
      agreeing += oc.agreeing_pairs;
      monotone += oc.monotone_checks;
      order_violations += oc.violations.size();
      longest = std::max(longest, oc.order.size());
      for (const auto& v : oc.violations)
        if (order_witnesses.size() < 16) {
          Json w;
          w["axiom"] = v.axiom;
          Json ws = Json::array();
          for (const Element& e : v.witness) ws.push_back(group.format(e));
          w["witness"] = std::move(ws);
          w["values"] = v.values;
          order_witnesses.push_back(std::move(w));
        }
    }
  }

  Json args;
  args["group"] = group_path;
  args["c"] = c;
  args["radius"] = radius;
  args["samples"] = samples;
  args["seed"] = seed;
  Json j = header("axioms", std::move(args));
  j["inputs"] = {{"group", input_json(gin)}};
  j["root"] = group.format(root);
  j["family_size"] = family.axes.size();
  j["P0"] = to_json(group, p0);
  j["P1"] = to_json(group, p1);
  j["SP"] = to_json(group, sp);
  j["order"] = {{"intervals", intervals},
                {"comparable_pairs", comparable},
                {"agreeing_pairs", agreeing},
                {"monotone_checks", monotone},
                {"longest_chain", longest},
                {"violation_count", order_violations},
                {"violations", std::move(order_witnesses)}};
  const bool pass = p0.pass() && p1.pass() && sp.pass() && order_violations == 0 && agreeing == comparable;
  j["pass"] = pass;
  emit(out, "axioms.json", dump(j));
  std::cout << "family " << family.axes.size() << " theta " << p0.theta << " theta' " << p0.theta_prime << "\n";
  std::cout << "P1 violations " << p1.violation_count << " over " << p1.sample_size << "\n";
  std::cout << "SP violations " << sp.violation_count << " over " << sp.sample_size << " (" << sp.conditional_checks
            << " conditional)\n";
  std::cout << "order pairs " << agreeing << "/" << comparable << " agree, violations " << order_violations << "\n";
  return pass ? kOk : kHard;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth, cogrowth and the conjugate-filtration pipeline on free groups"};
  app.require_subcommand(1);

  std::string group, oracle, config, out, c;
  int radius = 0, delta = 1;
  std::uint64_t samples = 200'000, seed = 1;

  auto* growth = app.add_subcommand("growth", "Shell census and growth rate");
  growth->add_option("--group", group, "Group spec file")->required();
  growth->add_option("--radius", radius, "Largest radius")->required();
  growth->add_option("--delta", delta, "Shell width");
  growth->add_option("--oracle", oracle, "Normal subgroup filter");
  growth->add_option("--out", out, "Output directory")->required();

  auto* cogrowth = app.add_subcommand("cogrowth", "Growth ratio of a normal subgroup");
  cogrowth->add_option("--group", group, "Group spec file")->required();
  cogrowth->add_option("--oracle", oracle, "Normal subgroup spec")->required();
  cogrowth->add_option("--radius", radius, "Largest radius")->required();
  cogrowth->add_option("--out", out, "Output directory")->required();

  auto* pipeline = app.add_subcommand("pipeline", "Conjugate filtration and injection checks");
  pipeline->add_option("--config", config, "Pipeline config file")->required();
  pipeline->add_option("--out", out, "Output directory")->required();

  auto* axioms = app.add_subcommand("axioms", "Projection axioms on a family of axes");
  axioms->add_option("--group", group, "Group spec file")->required();
  axioms->add_option("--c", c, "Element whose axis translates form the family")->required();
  axioms->add_option("--radius", radius, "Family radius")->required();
  axioms->add_option("--samples", samples, "Sampled tuples when a scan is not exhaustive");
  axioms->add_option("--seed", seed, "Sampling seed");
  axioms->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*growth) return cmd_growth(group, radius, delta, oracle, out);
    if (*cogrowth) return cmd_cogrowth(group, oracle, radius, out);
    if (*pipeline) return cmd_pipeline(config, out);
    if (*axioms) return cmd_axioms(group, c, radius, samples, seed, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kParse;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kRadius;
  } catch (const ConstantsError& e) {
    std::cerr << "constants error: " << e.what() << "\n";
    return kConstants;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
