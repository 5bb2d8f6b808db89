#include <algorithm>
#include <random>

#include "cogrowth/projection_axioms.hpp"
#include "doctest.h"

using namespace cogrowth;

namespace {

Group free_group() {
  GroupSpec s;
  s.ranks = {2};
  return Group(s);
}

// d^pi_Y(X, Z) from nearest-point projections of orbit points near Y.
long brute_axis_distance(const Group& g, const Axis& y, const Axis& x, const Axis& z) {
  long lo = 1L << 40, hi = -(1L << 40);
  for (const Axis* other : {&x, &z}) {
    const long reach = static_cast<long>(g.distance(y.coset_rep, other->coset_rep)) / other->step + 6;
    for (long j = -reach; j <= reach; ++j) {
      ProjectionSet p = project_brute_force(g, y, orbit_point(g, *other, j));
      lo = std::min(lo, p.lo());
      hi = std::max(hi, p.hi());
    }
  }
  return (hi - lo) * y.step;
}

Axis axis_of(const Group& g, const Element& root, const Element& x) { return make_axis(g, root, x); }

Element conjugate_power(const Group& g, const Element& root, const Element& x, long p) {
  return g.multiply(g.inverse(x), g.multiply(g.make(power_word(root.first, p)), x));
}

std::vector<std::string> reps(const Group& g, const std::vector<Axis>& axes) {
  std::vector<std::string> out;
  for (const Axis& a : axes) out.push_back(g.format(a.coset_rep));
  return out;
}

}  // namespace

TEST_CASE("projection table agrees with orbit-point projections") {
  Group f2 = free_group();
  for (const char* r : {"a", "ab", "aab"}) {
    AxisFamily fam = axis_family(f2, f2.parse(r), 3);
    ProjectionTable table(f2, fam, 2);
    REQUIRE(table.size() == fam.axes.size());
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> pick(0, fam.axes.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
      std::size_t x = pick(rng), y = pick(rng), z = pick(rng);
      if (x == y || z == y) {
        CHECK(table.distance(y, x, z) == kUnboundedProjection);
        continue;
      }
      CHECK(table.distance(y, x, z) == brute_axis_distance(f2, fam.axes[y], fam.axes[x], fam.axes[z]));
      CHECK(table.distance(y, x, z) == axis_proj_distance(f2, fam.axes[y], fam.axes[x], fam.axes[z]));
    }
  }
}

TEST_CASE("axis families are distinct translates") {
  Group f2 = free_group();
  AxisFamily fam = axis_family(f2, f2.parse("ab"), 4);
  for (std::size_t i = 1; i < fam.axes.size(); ++i)
    CHECK(f2.element_less(fam.axes[i - 1].coset_rep, fam.axes[i].coset_rep));
  for (const Element& g : f2.ball(4))
    CHECK(std::find(fam.axes.begin(), fam.axes.end(), make_axis(f2, fam.root, g)) != fam.axes.end());
  CHECK(axis_family(f2, f2.parse("a"), 0).axes.size() == 1);
}

TEST_CASE("small projections of distinct axes") {
  Group f2 = free_group();
  Element ab = f2.parse("ab");
  Axis e = axis_of(f2, ab, f2.identity());
  Axis b = axis_of(f2, ab, f2.parse("b"));
  CHECK(axis_proj_distance(f2, e, b, b) <= 2);
  const long far = axis_proj_distance(f2, e, axis_of(f2, ab, f2.parse("aab")), axis_of(f2, ab, f2.parse("aab")));
  CHECK(far < kUnboundedProjection);
  CHECK(far == brute_axis_distance(f2, e, axis_of(f2, ab, f2.parse("aab")), axis_of(f2, ab, f2.parse("aab"))));

  // Exactly one of the two projections in the triple is large.
  Axis z = axis_of(f2, ab, f2.parse("bababababb"));
  const long dy = axis_proj_distance(f2, b, e, z), dx = axis_proj_distance(f2, e, b, z);
  CHECK(dy > 2);
  CHECK(dx <= 2);
}

TEST_CASE("axioms hold on radius six families") {
  Group f2 = free_group();
  struct Expect {
    const char* root;
    long theta;
  };
  for (Expect ex : {Expect{"a", 0}, Expect{"ab", 2}}) {
    AxisFamily fam = axis_family(f2, f2.parse(ex.root), 6);
    ProjectionTable table(f2, fam);
    AxiomReport p0 = check_P0(fam, table);
    CHECK(p0.theta == ex.theta);
    CHECK(p0.theta_prime == 11 * p0.theta);
    REQUIRE(p0.maximizer);
    const auto& [y, x] = *p0.maximizer;
    CHECK(axis_proj_distance(f2, axis_of(f2, fam.root, y), axis_of(f2, fam.root, x), axis_of(f2, fam.root, x)) ==
          p0.theta);

    AxiomReport p1 = check_P1(fam, table, p0.theta);
    CHECK(p1.pass());
    CHECK(p1.exhaustive);
    CHECK(p1.sample_size >= 10'000);
    CHECK(p1.conditional_checks > 0);

    AxiomReport sp = check_SP(f2, fam, table, p0.theta);
    CHECK(sp.pass());
    CHECK(sp.sample_size >= 10'000);
    CHECK(sp.conditional_checks >= 1'000);
  }
}

TEST_CASE("axiom checkers report violations below the true constant") {
  Group f2 = free_group();
  AxisFamily fam = axis_family(f2, f2.parse("ab"), 3);
  ProjectionTable table(f2, fam);
  AxiomReport p1 = check_P1(fam, table, -1);
  CHECK_FALSE(p1.pass());
  CHECK(p1.violations.size() <= 16);
  CHECK(p1.violations.front().witness.size() == 3);

  AxiomOptions sampled;
  sampled.tuple_budget = 10;
  sampled.samples = 5'000;
  AxiomReport s = check_P1(fam, table, 2, sampled);
  CHECK_FALSE(s.exhaustive);
  CHECK(s.sample_size == 5'000);
  CHECK(s.pass());
}

TEST_CASE("single axis family is vacuous") {
  Group f2 = free_group();
  AxisFamily fam = axis_family(f2, f2.parse("ab"), 0);
  ProjectionTable table(f2, fam);
  CHECK(check_P0(fam, table).sample_size == 0);
  CHECK(check_P1(fam, table, 0).pass());
}

TEST_CASE("empty interval contains only its endpoints") {
  Group f2 = free_group();
  Element ab = f2.parse("ab");
  Axis x = axis_of(f2, ab, f2.identity()), z = axis_of(f2, ab, f2.parse("b"));
  AxisFamily fam = axis_family(f2, ab, 3);
  OrderCheck oc = order_interval(f2, x, z, fam.axes, 2);
  CHECK(oc.consistent());
  CHECK(reps(f2, oc.order) == std::vector<std::string>{"e", "A"});
}

TEST_CASE("conjugate axis lies between the base axis and the conjugate's axis") {
  Group f2 = free_group();
  Element ab = f2.parse("ab");
  const long theta = 2;
  Axis e = axis_of(f2, ab, f2.identity());
  for (const char* gs : {"b", "ba", "bb", "aB", "BBa"}) {
    Element g = f2.parse(gs);
    Axis mid = axis_of(f2, ab, f2.inverse(g));
    for (long p : {4L, 40L}) {
      Axis z = axis_of(f2, ab, conjugate_power(f2, ab, g, p));
      const Axis fam[] = {mid};
      OrderCheck oc = order_interval(f2, e, z, fam, theta);
      CHECK(oc.consistent());
      if (p == 40) {
        REQUIRE(oc.order.size() == 3);
        CHECK(oc.order[1] == mid);
      } else {
        // |c^4| is below 2 theta' so the middle axis is not in the interval.
        CHECK(oc.order.size() == 2);
      }
    }
  }
}

TEST_CASE("zig-zag chain of five axes is totally ordered") {
  Group f2 = free_group();
  Element ab = f2.parse("ab");
  const long theta = 2;
  const Element link = f2.multiply(f2.make(power_word(ab.first, 30)), f2.parse("b"));
  std::vector<Axis> chain;
  Element h = f2.identity();
  for (int i = 0; i < 5; ++i) {
    chain.push_back(axis_of(f2, ab, h));
    h = f2.multiply(h, link);
  }
  std::vector<Axis> fam = axis_family(f2, ab, 3).axes;
  fam.insert(fam.end(), {chain[3], chain[1], chain[2]});
  OrderCheck oc = order_interval(f2, chain[0], chain[4], fam, theta);
  CHECK(oc.consistent());
  CHECK(oc.order == chain);
  CHECK(oc.comparable_pairs == 20);
  CHECK(oc.agreeing_pairs == 20);
  CHECK(oc.monotone_checks == 1 * 3 + 2 * 2 + 3 * 1);
}

TEST_CASE("order conditions agree and the order is equivariant") {
  Group f2 = free_group();
  Element ab = f2.parse("ab");
  const long theta = 2;
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> letter(0, 3), len(1, 3);
  std::vector<Element> shifts = f2.ball(2);
  for (int trial = 0; trial < 40; ++trial) {
    // A random chain of axes joined by long powers and short connectors.
    std::vector<Axis> members;
    Element h = f2.identity();
    for (int i = 0; i < 4; ++i) {
      Word connector;
      for (int k = len(rng); k > 0; --k) connector.push_back(static_cast<Letter>(letter(rng)));
      h = f2.multiply(h, f2.multiply(f2.make(power_word(ab.first, 28)), f2.make(connector)));
      members.push_back(axis_of(f2, ab, h));
    }
    Axis x = axis_of(f2, ab, f2.identity()), z = members.back();
    members.pop_back();
    OrderCheck oc = order_interval(f2, x, z, members, theta);
    CHECK(oc.consistent());
    CHECK(oc.agreeing_pairs == oc.comparable_pairs);
    for (std::size_t i = 0; i + 1 < oc.order.size(); ++i)
      for (std::size_t j = i + 1; j < oc.order.size(); ++j) {
        auto c = order_conditions(f2, x, z, oc.order[i], oc.order[j], 11 * theta);
        CHECK(std::all_of(c.begin(), c.end(), [](bool v) { return v; }));
        auto r = order_conditions(f2, x, z, oc.order[j], oc.order[i], 11 * theta);
        CHECK(std::none_of(r.begin(), r.end(), [](bool v) { return v; }));
      }

    const Element& g = shifts[static_cast<std::size_t>(trial) % shifts.size()];
    std::vector<Axis> moved;
    for (const Axis& a : members) moved.push_back(axis_of(f2, ab, f2.multiply(g, a.coset_rep)));
    OrderCheck og = order_interval(f2, axis_of(f2, ab, g), axis_of(f2, ab, f2.multiply(g, z.coset_rep)), moved, theta);
    REQUIRE(og.order.size() == oc.order.size());
    for (std::size_t i = 0; i < oc.order.size(); ++i)
      CHECK(og.order[i] == axis_of(f2, ab, f2.multiply(g, oc.order[i].coset_rep)));
  }
}
