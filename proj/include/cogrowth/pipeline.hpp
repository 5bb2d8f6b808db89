#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogrowth/geometry.hpp"
#include "cogrowth/growth.hpp"
#include "cogrowth/oracle.hpp"
#include "cogrowth/projection_axioms.hpp"

namespace cogrowth {

/// Packed storage for many reduced words.
class WordArena {
 public:
  std::size_t size() const { return offsets_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::span<const Letter> operator[](std::size_t i) const {
    return {letters_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::size_t length(std::size_t i) const { return static_cast<std::size_t>(offsets_[i + 1] - offsets_[i]); }
  void push_back(std::span<const Letter> w) {
    letters_.insert(letters_.end(), w.begin(), w.end());
    offsets_.push_back(letters_.size());
  }
  void reserve(std::size_t words, std::size_t letters) {
    offsets_.reserve(words + 1);
    letters_.reserve(letters);
  }

 private:
  std::vector<Letter> letters_;
  std::vector<std::uint64_t> offsets_{0};
};

/// A constant of the construction with where it came from.
struct LedgerValue {
  long value = 0;
  Provenance provenance = Provenance::measured;
};

struct ChecklistItem {
  std::string name;
  long lhs = 0;
  long rhs = 0;
  /// lhs > rhs when strict, lhs >= rhs otherwise.
  bool strict = true;
  bool pass = false;
};

struct PipelineConstants {
  LedgerValue C, C_prime, theta, theta_prime, K, D, p;
  int measurement_radius = 0;
  long Delta = 1;
  long f0_norm = 0;
  long c_norm = 0;
  long c_p_norm = 0;
  long E = 0;
  long Delta_prime = 0;
  std::vector<ChecklistItem> checklist;

  bool checklist_pass() const;
  /// Checklist items that gate running the stages (everything but D).
  bool stages_allowed() const;
};

/// Optional overrides; absent values are chosen automatically.
struct ConstantOverrides {
  std::optional<long> K, D, p;
};

/// Smallest K > max(C, theta + theta'/2), D = 7K + 2C', and the smallest p
/// with |c^p| above every combination in the checklist.
PipelineConstants choose_constants(long C, long C_prime, long theta, long c_norm, long f0_norm, int measurement_radius,
                                   const ConstantOverrides& overrides = {});

struct F0Result {
  Element f0;
  /// "search" (shortlex search of a ball) or "closest-pair".
  std::string method;
  /// diam pi_{f0 E}(o) and diam pi_E(f0.o).
  long diam_at_f0_axis = 0;
  long diam_at_base_axis = 0;
  bool within_C = false;
};

/// f0 with f0 E != E, o in pi_E(f0.o) and f0.o in pi_{f0 E}(o), found by a
/// shortlex search of the ball; falls back to the closest pair between E and
/// g E for the first g outside the stabiliser. Free groups only.
F0Result find_f0(const Group& group, const Axis& axis, int radius, long C);

/// g in G1: d^pi_E(o, g.o) <= 2K, d^pi_{gE}(o, g.o) <= 2K and gE != E.
bool in_G1(const Axis& axis, std::span<const Letter> g, long K);

enum class Stage { G1, G2, G3, G4 };
std::string to_string(Stage s);

struct CandidateSet {
  Stage stage = Stage::G1;
  /// Elements in (norm, shortlex) order.
  WordArena elements;
  /// Index of each element's preimage in the previous stage: the G1 index of
  /// the shortlex-least preimage for G2, the G2 (G3) index for G3 (G4).
  std::vector<std::uint32_t> source;

  std::size_t size() const { return elements.size(); }
};

struct Witness {
  std::string check;
  std::vector<std::string> words;
  std::vector<long> values;
};

struct CheckOutcome {
  explicit CheckOutcome(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  bool hard = true;
  std::vector<Witness> witnesses;

  bool pass() const { return failed == 0; }
  void fail(Witness w);
};

struct G1Result {
  CandidateSet set;
  int radius = 0;
  int phi0_domain_radius = 0;
  std::uint64_t phi0_domain = 0;
  std::uint64_t phi0_fixed = 0;
  std::uint64_t phi0_max_fiber = 0;
  long phi0_max_displacement = 0;
  CheckOutcome lemma{"phi0-candidate"};
  CheckOutcome displacement{"phi0-displacement"};
  CheckOutcome fiber{"phi0-fiber"};
  CheckOutcome inverse_closed{"G1-inverse-closed"};
};

G1Result build_G1(const Group& group, const Axis& axis, const Element& f0, long K, int r_max);

struct G2Result {
  CandidateSet set;
  std::uint64_t max_fiber = 0;
  long max_fiber_spread = 0;
  CheckOutcome sandwich{"norm-sandwich"};
  CheckOutcome fiber{"phi1-fiber"};
  CheckOutcome order{"G2-order"};
};

/// Conjugates g^-1 c^p g with provenance. The order lemma is checked for
/// every g in G1 with |g| <= order_radius.
G2Result build_G2(const Group& group, const Axis& axis, std::span<const Letter> c, const G1Result& g1,
                  const PipelineConstants& constants, int order_radius);

struct G3Result {
  CandidateSet set;
  std::uint64_t max_fiber = 0;
  long max_displacement = 0;
  std::uint64_t bucket_pairs = 0;
  CheckOutcome separation{"separation"};
  CheckOutcome same_axis{"same-axis"};
  CheckOutcome endpoint{"endpoint-projection"};
  CheckOutcome displacement{"phi2-displacement"};
};

/// Greedy (6K+1)-separated net of G2 in element order; phi2 sends each G2
/// element to its nearest accepted element.
G3Result build_G3(const Axis& axis, const CandidateSet& g2, long K, std::uint64_t seed = 1);

struct SurvivalShell {
  long lo = 0;
  std::uint64_t g3 = 0;
  std::uint64_t g4 = 0;
  bool admissible = false;
  double fraction() const { return g3 == 0 ? 1.0 : static_cast<double>(g4) / static_cast<double>(g3); }
};

struct G4Result {
  CandidateSet set;
  std::uint64_t removed = 0;
  /// Shells of width Delta'.
  std::vector<SurvivalShell> shells;
  /// Unit shells, used by the fallback rule.
  std::vector<SurvivalShell> unit_shells;
  bool admissible_reachable = false;
  /// Survival >= 1/2 on admissible shells, or survival > 0 on the top three
  /// non-empty shells when none is reachable.
  bool survival_pass = false;
  std::string survival_rule;
  std::vector<Witness> shadow_witnesses;
};

/// Removes g^-1 c^p g when a different h^-1 c^p h in G3 has its marker
/// h^-1 c^p h c^{2p}.o within D of the geodesic from o to g^-1 c^p g.o.
G4Result build_G4(std::span<const Letter> c, const CandidateSet& g3, const PipelineConstants& constants);

struct InjectionResult {
  int k_max = 0;
  long norm_budget = 0;
  std::uint64_t generators = 0;
  std::uint64_t tuples = 0;
  std::vector<std::uint64_t> tuples_by_length;
  CheckOutcome collisions{"injection"};
};

/// Preimage norms |e| of G4 elements, following provenance back to G1.
std::vector<long> preimage_norms(const CandidateSet& g1, const CandidateSet& g2, const CandidateSet& g3,
                                 const CandidateSet& g4);

/// Images (g1 c^2p ... gk c^2p).o of all tuples over G4 with k <= k_max and
/// total preimage norm <= norm_budget; any two equal images are a collision.
InjectionResult tree_injection_scan(std::span<const Letter> c, const CandidateSet& g4,
                                    std::span<const long> preimage_norm, long p, int k_max, long norm_budget);

struct ZigzagResult {
  std::uint64_t tuples = 0;
  int k_max = 0;
  CheckOutcome base{"zigzag-base"};
  CheckOutcome inductive{"zigzag-inductive"};
};

/// Projection bounds along the chain of axes of sampled tuples: consecutive
/// pairs below 3K and all pairs below 5K.
ZigzagResult check_zigzag(const Group& group, const Axis& axis, std::span<const Letter> c, const CandidateSet& g1,
                          const CandidateSet& g2, const CandidateSet& g3, const CandidateSet& g4, const PipelineConstants& constants, std::uint64_t samples,
                          int k_max, std::uint64_t seed);

enum class CertificateVerdict { certified, inconclusive };
std::string to_string(CertificateVerdict v);

struct EpsilonCertificate {
  double delta = 0.0;
  double epsilon = 0.0;
  double grid_step = 0.0;
  /// log of the partial sum and of exp(s |c^2p|) at the certified epsilon.
  double log_partial_sum = 0.0;
  double log_threshold = 0.0;
  CertificateVerdict verdict = CertificateVerdict::inconclusive;
};

inline constexpr double kEpsilonStep = 0.0005;
inline constexpr double kEpsilonMax = 0.2;

/// Largest epsilon on the grid with sum_r counts_r exp(-(delta + eps) r) >=
/// exp((delta + eps) c2p_norm). Inconclusive when no positive grid point works.
EpsilonCertificate cogrowth_lower_bound(const ShellCensus& census, double delta, long c2p_norm);

struct CogrowthRatio {
  ShellCensus subgroup;
  ShellCensus group;
  GrowthReport subgroup_rate;
  GrowthReport group_rate;
  double ratio = 0.0;
};

CogrowthRatio cogrowth_ratio(const Group& group, const NormalSubgroupOracle& oracle, int r_max);

/// Per-norm counts of a candidate set as a unit-shell census.
ShellCensus stage_census(const CandidateSet& set, long max_norm);

struct PipelineConfig {
  std::string group_path;
  GroupSpec group;
  std::string c;
  ConstantOverrides overrides;
  int r_max = 12;
  int k_max = 2;
  long norm_budget = 10;
  int measurement_radius = 6;
  int order_radius = 6;
  int f0_radius = 4;
  std::uint64_t zigzag_samples = 1000;
  int zigzag_k_max = 3;
  std::uint64_t seed = 1;
};

/// Parses a pipeline config. `group=` names a group spec file, resolved
/// relative to `base_dir`.
PipelineConfig parse_pipeline_config(std::string_view text, const std::string& base_dir);

struct PipelineRun {
  PipelineConfig config;
  Element c;
  Element root;
  ContractionMeasurement contraction;
  BgiMeasurement bgi;
  AxiomReport p0;
  PipelineConstants constants;
  bool stages_run = false;
  F0Result f0;
  G1Result g1;
  G2Result g2;
  G3Result g3;
  G4Result g4;
  /// Largest norm up to which the stage censuses are complete.
  long census_max_norm = 0;
  ShellCensus group_census;
  ShellCensus g3_census;
  ShellCensus g4_census;
  std::optional<GrowthReport> group_rate;
  std::optional<GrowthReport> g3_rate;
  std::optional<GrowthReport> g4_rate;
  InjectionResult injection;
  ZigzagResult zigzag;
  EpsilonCertificate certificate;

  std::vector<const CheckOutcome*> hard_checks() const;
  bool hard_pass() const;
  /// 0, 4 (hard assertion failed) or 5 (checklist failed).
  int exit_code() const;
};

PipelineRun run_pipeline(const PipelineConfig& config);

}  // namespace cogrowth
