#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogrowth/group.hpp"

namespace cogrowth {

/// A translate g.E of the orbit E = <c0>.o, where c0 is cyclically reduced
/// (componentwise for products) so that |c0^k| = |k| * step exactly.
struct Axis {
  Element root;
  /// Shortlex-least element of g<c0> among those of least norm.
  Element coset_rep;
  int step = 0;

  friend bool operator==(const Axis& a, const Axis& b) {
    return a.coset_rep == b.coset_rep && a.root == b.root;
  }
};

/// Canonicalises g<root>. Throws UsageError if the root is trivial or not
/// cyclically reduced, or the backend is not free or a product.
Axis make_axis(const Group& group, const Element& root, const Element& g);

/// Exponents k such that rep * root^k lies in pi_Y(x), plus d(x, Y).
struct ProjectionSet {
  std::vector<long> exponents;
  long distance = 0;

  long lo() const { return exponents.front(); }
  long hi() const { return exponents.back(); }
};

struct WindowOptions {
  /// Largest exponent window a brute-force projection may scan.
  long max_window = 1'000'000;
};

/// Nearest-point projection of x onto the orbit of the axis. Free groups use
/// the tree structure; products scan a certified exponent window.
ProjectionSet project(const Group& group, const Axis& axis, const Element& x, const WindowOptions& options = {});
/// Reference implementation scanning a certified window (any backend).
ProjectionSet project_brute_force(const Group& group, const Axis& axis, const Element& x,
                                  const WindowOptions& options = {});
std::vector<Element> projection_points(const Group& group, const Axis& axis, const ProjectionSet& p);
Element orbit_point(const Group& group, const Axis& axis, long k);

/// diam(pi(A) u pi(B)) for precomputed projections.
long proj_distance(const Axis& axis, const ProjectionSet& a, const ProjectionSet& b);
/// diam(pi(A) u pi(B)) for point sets.
long proj_distance(const Group& group, const Axis& axis, std::span<const Element> a, std::span<const Element> b);

// ----- Free group fast path ---------------------------------------------

/// Nearest point of the line ...c0 c0 c0... through the identity to the
/// reduced word y: its signed position along the line and d(y, line).
struct LineFoot {
  long position = 0;
  long off_line = 0;
};
LineFoot line_foot(std::span<const Letter> y, std::span<const Letter> root);

/// Orbit exponents nearest to a line position (one, or two on a tie).
struct ExponentSpan {
  long lo = 0;
  long hi = 0;
  long distance = 0;
};
ExponentSpan nearest_exponents(const LineFoot& foot, long step);

/// Projection of x onto rep.<root>.o in a free group.
ExponentSpan project_free(std::span<const Letter> rep, std::span<const Letter> root, std::span<const Letter> x);

/// Shortlex-least element of g<root> of least length, in a free group.
Word canonical_coset_rep(std::span<const Letter> g, std::span<const Letter> root);

/// Projection of one axis onto another in a free group. `self` is set when
/// the axes coincide (their mutual projection has infinite diameter).
struct AxisSpan {
  bool self = false;
  long lo = 0;
  long hi = 0;
};
AxisSpan project_axis_free(std::span<const Letter> onto_rep, std::span<const Letter> other_rep,
                           std::span<const Letter> root);
AxisSpan project_axis(const Group& group, const Axis& onto, const Axis& other);

// ----- Measured constants -----------------------------------------------

enum class Provenance { measured, asserted, derived };
std::string to_string(Provenance p);

struct ProjectionConstants {
  double C = 0.0;
  double C_prime = 0.0;
  int measurement_radius = 0;
  Provenance provenance = Provenance::measured;
};

struct ContractionOptions {
  /// Above this many (x, x') pairs the check samples instead.
  std::uint64_t pair_budget = 4'000'000;
  std::uint64_t seed = 1;
};

struct ContractionMeasurement {
  /// Largest projection distance over pairs with d(x, x') <= d(x, Y).
  long C = 0;
  /// Running maximum over pairs with max(|x|, |x'|) <= r, for r = 0..radius.
  std::vector<long> per_radius;
  bool contracting = true;
  bool exhaustive = true;
  std::uint64_t pairs = 0;
  std::optional<std::pair<Element, Element>> witness;
};

/// Measures the contraction constant over the ball of the given radius.
/// The result is flagged non-contracting when the running maximum still
/// grows over either of the last two radius increments.
ContractionMeasurement measure_contraction(const Group& group, const Axis& axis, int radius,
                                           const ContractionOptions& options = {});

struct BgiMeasurement {
  long C_prime = 0;
  bool found = false;
  bool exhaustive = true;
  std::uint64_t geodesics = 0;
  /// Geodesics that exercised the entry/exit claims at the returned C'.
  std::uint64_t corollary_checks = 0;
  std::uint64_t corollary_violations = 0;
};

/// Smallest C' >= C such that geodesics between points of the ball that stay
/// at distance >= C' from the axis have projection diameter <= C', and the
/// entry/exit claims of bounded geodesic image hold.
BgiMeasurement measure_bgi(const Group& group, const Axis& axis, int radius, long C,
                           const ContractionOptions& options = {});

/// Primitive root of the cyclic reduction of c: generates the maximal cyclic
/// subgroup containing a conjugate of c. Free groups only.
Element elementary_closure_root(const Group& group, const Element& c);

}  // namespace cogrowth
