#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogrowth/geometry.hpp"

namespace cogrowth {

/// Projection distance standing in for an infinite diameter (an axis
/// projected onto itself).
inline constexpr long kUnboundedProjection = std::numeric_limits<long>::max() / 4;

/// d^pi_Y(X, Z) for axes of a free group; kUnboundedProjection if X or Z is Y.
long axis_proj_distance(const Group& group, const Axis& y, const Axis& x, const Axis& z);

/// Distinct translates g.E with |g| <= radius, in order of canonical rep.
struct AxisFamily {
  Element root;
  int radius = 0;
  std::vector<Axis> axes;
};
AxisFamily axis_family(const Group& group, const Element& root, int radius);

/// All pairwise axis projections of a family, indexed [onto][other].
class ProjectionTable {
 public:
  ProjectionTable(const Group& group, const AxisFamily& family, unsigned threads = 0);

  std::size_t size() const { return n_; }
  /// d^pi_Y(X, Z) by family index.
  long distance(std::size_t y, std::size_t x, std::size_t z) const;

 private:
  std::size_t n_ = 0;
  long step_ = 0;
  std::vector<long> lo_, hi_;
};

struct AxiomViolation {
  std::string axiom;
  std::vector<Element> witness;
  std::vector<long> values;
};

struct AxiomReport {
  std::string axiom;
  long theta = 0;
  long theta_prime = 0;
  std::vector<AxiomViolation> violations;
  std::uint64_t violation_count = 0;
  std::uint64_t sample_size = 0;
  /// Tuples meeting the hypothesis of a conditional axiom.
  std::uint64_t conditional_checks = 0;
  bool exhaustive = true;
  /// P0 only: the pair realising theta.
  std::optional<std::pair<Element, Element>> maximizer;

  bool pass() const { return violation_count == 0; }
};

struct AxiomOptions {
  /// Exhaustive triple scans are used up to this many tuples, then sampling.
  std::uint64_t tuple_budget = 1'000'000'000;
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Witnesses kept per report; all violations are counted.
  std::size_t max_witnesses = 16;
};

/// theta = max over distinct pairs of d^pi_Y(X, X).
AxiomReport check_P0(const AxisFamily& family, const ProjectionTable& table);
/// No distinct triple has both d^pi_Y(X, Z) > theta and d^pi_X(Y, Z) > theta.
AxiomReport check_P1(const AxisFamily& family, const ProjectionTable& table, long theta,
                     const AxiomOptions& options = {});
/// SP4 as d^pi <= theta' and SP3 up to the 2 theta slack, on random
/// quadruples from the family and on chained translates along the root.
AxiomReport check_SP(const Group& group, const AxisFamily& family, const ProjectionTable& table, long theta,
                     const AxiomOptions& options = {});

struct OrderCheck {
  /// X, the sorted middle axes, then Z.
  std::vector<Axis> order;
  std::uint64_t comparable_pairs = 0;
  std::uint64_t agreeing_pairs = 0;
  std::uint64_t monotone_checks = 0;
  std::vector<AxiomViolation> violations;

  bool consistent() const { return violations.empty(); }
};

/// The four order conditions for Y0 before Y1 on the interval from X to Z.
std::vector<bool> order_conditions(const Group& group, const Axis& x, const Axis& z, const Axis& y0, const Axis& y1,
                                   long theta_prime);

/// Middle axes Y with d^pi_Y(X, Z) > 2 theta' + 2 theta, sorted by the order
/// condition d^pi_Y0(X, Y1) > theta'. Disagreements among the four
/// conditions, a non-total relation, and failures of the monotone identity
/// are reported as violations; the order is never repaired.
OrderCheck order_interval(const Group& group, const Axis& x, const Axis& z, std::span<const Axis> family, long theta);

}  // namespace cogrowth
