#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <unordered_set>

#include "cogrowth/errors.hpp"
#include "cogrowth/group.hpp"
#include "cogrowth/growth.hpp"
#include "cogrowth/oracle.hpp"
#include "cogrowth/spec_io.hpp"
#include "doctest.h"

using namespace cogrowth;

namespace {

// Independent free reduction on strings: 'a'/'A' are mutually inverse.
std::string string_reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::vector<std::string> string_letters(int rank) {
  const std::string names = "abcdfg";
  std::vector<std::string> out;
  for (int i = 0; i < rank; ++i) {
    out.push_back(std::string(1, names[static_cast<std::size_t>(i)]));
    out.push_back(std::string(1, static_cast<char>(std::toupper(names[static_cast<std::size_t>(i)]))));
  }
  return out;
}

// Breadth-first search on the Cayley graph of F_rank with string words.
std::vector<std::uint64_t> bfs_free_spheres(int rank, int r) {
  std::vector<std::uint64_t> spheres(static_cast<std::size_t>(r) + 1, 0);
  std::set<std::string> seen{""};
  std::vector<std::string> frontier{""};
  spheres[0] = 1;
  for (int k = 1; k <= r; ++k) {
    std::vector<std::string> next;
    for (const auto& w : frontier)
      for (const auto& x : string_letters(rank)) {
        std::string v = string_reduce(w + x);
        if (seen.insert(v).second) next.push_back(v);
      }
    spheres[static_cast<std::size_t>(k)] = next.size();
    frontier = std::move(next);
  }
  return spheres;
}

// Breadth-first search on F_2 x F_2 with generators (S u 1) x (S u 1).
std::vector<std::uint64_t> bfs_product_spheres(int r) {
  using P = std::pair<std::string, std::string>;
  std::vector<std::string> steps = string_letters(2);
  steps.push_back("");
  std::vector<std::uint64_t> spheres(static_cast<std::size_t>(r) + 1, 0);
  std::set<P> seen{{"", ""}};
  std::vector<P> frontier{{"", ""}};
  spheres[0] = 1;
  for (int k = 1; k <= r; ++k) {
    std::vector<P> next;
    for (const auto& [u, v] : frontier)
      for (const auto& x : steps)
        for (const auto& y : steps) {
          P p{string_reduce(u + x), string_reduce(v + y)};
          if (seen.insert(p).second) next.push_back(p);
        }
    spheres[static_cast<std::size_t>(k)] = next.size();
    frontier = std::move(next);
  }
  return spheres;
}

Group free_group(int rank, int bound = 16) {
  GroupSpec s;
  s.ranks = {rank};
  s.radius_bound = bound;
  return Group(s);
}

Group product_group(int bound = 8) {
  GroupSpec s;
  s.kind = GroupKind::direct_product_of_free;
  s.ranks = {2, 2};
  s.radius_bound = bound;
  return Group(s);
}

Element random_element(const Group& g, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  auto word = [&](int rank) {
    Word w;
    int n = len(rng);
    std::uniform_int_distribution<int> letter(0, 2 * rank - 1);
    for (int i = 0; i < n; ++i) w.push_back(static_cast<Letter>(letter(rng)));
    return w;
  };
  if (g.is_product()) return g.make(word(g.spec().ranks[0]), word(g.spec().ranks[1]));
  return g.make(word(g.spec().ranks[0]));
}

// PSL(2, Z) matrices: x -> S (order 2), y -> ST (order 3).
using Mat = std::array<long long, 4>;
Mat mul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}
bool psl_trivial(const Word& w) {
  const Mat s{0, -1, 1, 0}, s_inv{0, 1, -1, 0};
  const Mat u{0, -1, 1, 1}, u_inv{1, 1, -1, 0};
  Mat m{1, 0, 0, 1};
  for (Letter x : w) {
    const Mat& step = x == 0 ? s : x == 1 ? s_inv : x == 2 ? u : u_inv;
    m = mul(m, step);
  }
  return (m == Mat{1, 0, 0, 1}) || (m == Mat{-1, 0, 0, -1});
}

}  // namespace

TEST_CASE("words: reduction, inverse and shortlex letter order") {
  CHECK(format_word(parse_word("aAb", 2)) == "b");
  CHECK(format_word(inverse_word(parse_word("abB", 2))) == "A");
  CHECK(format_word(parse_word("e", 2)) == "e");
  CHECK_THROWS_AS(parse_word("ax", 2), ParseError);
  CHECK(shortlex_less(parse_word("a", 2), parse_word("A", 2)));
  CHECK(shortlex_less(parse_word("A", 2), parse_word("b", 2)));
  CHECK(shortlex_less(parse_word("B", 2), parse_word("aa", 2)));
  auto cr = cyclically_reduce(parse_word("abAbA", 2));
  CHECK(format_word(cr.conjugator) == "a");
  CHECK(format_word(cr.core) == "bAb");
  CHECK(format_word(primitive_root(parse_word("abab", 2))) == "ab");
  CHECK(format_word(primitive_root(parse_word("aab", 2))) == "aab");
  CHECK(generator_name(4) == 'f');
  CHECK(format_word(power_word(parse_word("ab", 2), -2)) == "BABA");
}

TEST_CASE("free group balls match breadth-first search and closed form") {
  Group f2 = free_group(2);
  auto bfs = bfs_free_spheres(2, 8);
  std::uint64_t total = 0;
  for (int r = 0; r <= 8; ++r) {
    total += bfs[static_cast<std::size_t>(r)];
    CHECK(f2.ball_size(r) == total);
    std::uint64_t counted = 0;
    f2.enumerate_ball(r, [&](const Element&) { ++counted; });
    CHECK(counted == total);
  }
  for (int r = 0; r <= 12; ++r) {
    std::uint64_t p = 1;
    for (int i = 0; i < r; ++i) p *= 3;
    CHECK(f2.ball_size(r) == 2 * p - 1);
  }
  Group z = free_group(1);
  CHECK(z.ball_size(5) == 11);
  Group f3 = free_group(3);
  auto bfs3 = bfs_free_spheres(3, 5);
  CHECK(f3.ball_size(5) - f3.ball_size(4) == bfs3[5]);
}

TEST_CASE("product balls match breadth-first search and closed form") {
  Group g = product_group();
  auto bfs = bfs_product_spheres(4);
  std::uint64_t total = 0;
  for (int r = 0; r <= 4; ++r) {
    total += bfs[static_cast<std::size_t>(r)];
    CHECK(g.ball_size(r) == total);
    std::uint64_t counted = 0;
    g.enumerate_ball(r, [&](const Element& e) {
      CHECK(e.norm <= r);
      ++counted;
    });
    CHECK(counted == total);
  }
  CHECK(g.ball_size(6) == 1457ull * 1457ull);
  CHECK(g.metric_generators().size() == 24);
}

TEST_CASE("enumeration is in shortlex order within spheres and indexing is a bijection") {
  for (const Group& g : {free_group(2), product_group()}) {
    const int r = g.is_product() ? 3 : 6;
    std::vector<Element> ball = g.ball(r);
    CHECK(ball.size() == g.ball_size(r));
    for (std::size_t i = 1; i < ball.size(); ++i) CHECK(g.element_less(ball[i - 1], ball[i]));
    std::vector<bool> hit(ball.size(), false);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      auto idx = g.ball_index(ball[i], r);
      REQUIRE(idx < ball.size());
      CHECK_FALSE(hit[idx]);
      hit[idx] = true;
      CHECK(g.ball_element(idx, r) == ball[i]);
      if (g.is_free()) CHECK(idx == i);
    }
  }
}

TEST_CASE("group axioms and metric properties on random elements") {
  std::mt19937_64 rng(7);
  for (const Group& g : {free_group(2), product_group()}) {
    for (int trial = 0; trial < 300; ++trial) {
      Element x = random_element(g, rng, 10), y = random_element(g, rng, 10), z = random_element(g, rng, 10);
      CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
      CHECK(g.multiply(x, g.inverse(x)) == g.identity());
      CHECK(g.multiply(g.identity(), x) == x);
      CHECK(g.distance(x, y) == g.distance(y, x));
      CHECK(g.distance(x, z) <= g.distance(x, y) + g.distance(y, z));
      CHECK(g.distance(g.multiply(z, x), g.multiply(z, y)) == g.distance(x, y));
      CHECK((g.distance(x, y) == 0) == (x == y));
    }
  }
}

TEST_CASE("geodesics are shortlex-first and realise the distance") {
  Group f2 = free_group(2);
  auto path = f2.geodesic(f2.identity(), f2.parse("ab"));
  REQUIRE(path.size() == 3);
  CHECK(f2.format(path[0]) == "e");
  CHECK(f2.format(path[1]) == "a");
  CHECK(f2.format(path[2]) == "ab");

  std::mt19937_64 rng(11);
  Group g = product_group();
  for (int trial = 0; trial < 200; ++trial) {
    Element x = random_element(g, rng, 6), y = random_element(g, rng, 6);
    auto p = g.geodesic(x, y);
    REQUIRE(static_cast<int>(p.size()) == g.distance(x, y) + 1);
    CHECK(p.front() == x);
    CHECK(p.back() == y);
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(g.distance(p[i - 1], p[i]) == 1);
    // Shortlex-first: each step is the least generator that decreases distance.
    for (std::size_t i = 1; i < p.size(); ++i) {
      const int remaining = g.distance(p[i - 1], y);
      for (const Element& s : g.metric_generators()) {
        Element q = g.multiply(p[i - 1], s);
        if (g.distance(q, y) == remaining - 1) {
          CHECK(q == p[i]);
          break;
        }
      }
    }
  }
}

TEST_CASE("radius bound is enforced") {
  Group f2 = free_group(2, 5);
  CHECK_THROWS_AS(f2.enumerate_ball(6, [](const Element&) {}), ResourceError);
  CHECK_NOTHROW(f2.enumerate_ball(5, [](const Element&) {}));
}

TEST_CASE("finitely presented groups via coset enumeration") {
  GroupSpec s;
  s.kind = GroupKind::finitely_presented;
  s.ranks = {2};
  s.relators = {parse_word("aa", 2), parse_word("bbb", 2), parse_word("abab", 2)};
  Group s3(s);
  CHECK(s3.order() == 6);
  CHECK(s3.ball_size(10) == 6);
  CHECK(s3.make(parse_word("aa", 2)) == s3.identity());
  CHECK(s3.make(parse_word("bbbb", 2)) == s3.make(parse_word("b", 2)));
  CHECK(s3.make(parse_word("ab", 2)) == s3.make(parse_word("Ba", 2)));
  std::vector<Element> all = s3.ball(3);
  CHECK(all.size() == 6);
  for (const auto& x : all)
    for (const auto& y : all)
      for (const auto& z : all)
        CHECK(s3.multiply(s3.multiply(x, y), z) == s3.multiply(x, s3.multiply(y, z)));

  GroupSpec q8;
  q8.kind = GroupKind::finitely_presented;
  q8.ranks = {2};
  q8.relators = {parse_word("aaaa", 2), parse_word("aaBB", 2), parse_word("abaB", 2)};
  CHECK(Group(q8).order() == 8);

  GroupSpec infinite;
  infinite.kind = GroupKind::finitely_presented;
  infinite.ranks = {2};
  infinite.relators = {parse_word("abAB", 2)};
  infinite.coset_limit = 5000;
  CHECK_THROWS_AS(Group{infinite}, ResourceError);
}

TEST_CASE("oracles agree with independent membership tests") {
  Group f2 = free_group(2);
  auto z2 = NormalSubgroupOracle::finite_permutation({{1, 0}, {1, 0}});
  auto zmap = NormalSubgroupOracle::integer({1, 0});
  auto comm = NormalSubgroupOracle::commutator(2);
  auto psl = NormalSubgroupOracle::free_product({2, 3}, {{{0, 1}}, {{1, 1}}});
  f2.enumerate_ball(8, [&](const Element& g) {
    long a = 0, b = 0;
    for (Letter x : g.first) (letter_generator(x) == 0 ? a : b) += letter_is_inverse(x) ? -1 : 1;
    CHECK(z2.contains(f2, g) == (g.norm % 2 == 0));
    CHECK(zmap.contains(f2, g) == (a == 0));
    CHECK(comm.contains(f2, g) == (a == 0 && b == 0));
    CHECK(psl.contains(f2, g) == psl_trivial(g.first));
  });

  // The kernel of the projection of F2 x F2 onto its second factor is F2 x 1.
  Group g = product_group();
  auto second = NormalSubgroupOracle::free_product({0, 0}, {{}, {}, {{0, 1}}, {{1, 1}}});
  g.enumerate_ball(3, [&](const Element& x) { CHECK(second.contains(g, x) == x.second.empty()); });
}

TEST_CASE("filtered census matches brute-force enumeration") {
  Group f2 = free_group(2);
  auto psl = NormalSubgroupOracle::free_product({2, 3}, {{{0, 1}}, {{1, 1}}});
  auto perm = NormalSubgroupOracle::finite_permutation({{1, 2, 0}, {1, 0, 2}});
  for (const auto* oracle : {&psl, &perm}) {
    std::vector<std::uint64_t> brute(10, 0);
    f2.enumerate_ball(9, [&](const Element& g) {
      if (oracle->contains(f2, g)) ++brute[static_cast<std::size_t>(g.norm)];
    });
    CHECK(norm_counts(f2, 9, oracle, 1) == brute);
    CHECK(norm_counts(f2, 9, oracle, 3) == brute);
  }
  auto z2 = NormalSubgroupOracle::finite_permutation({{1, 0}, {1, 0}});
  ShellCensus c = shell_census(f2, 3, 1, &z2);
  CHECK(c.counts == std::vector<double>{1, 0, 12, 0});

  Group g = product_group();
  auto first_factor = NormalSubgroupOracle::free_product({0, 0}, {{}, {}, {{0, 1}}, {{1, 1}}});
  auto counts = norm_counts(g, 4, &first_factor);
  for (int r = 0; r <= 4; ++r)
    CHECK(counts[static_cast<std::size_t>(r)] == f2.ball_size(r) - (r ? f2.ball_size(r - 1) : 0));
}

TEST_CASE("group and oracle spec parsing") {
  GroupSpec s = parse_group_spec("kind=free\nrank=2\nradius_bound=16\n");
  CHECK(s.kind == GroupKind::free);
  CHECK(s.ranks == std::vector<int>{2});
  CHECK(s.radius_bound == 16);
  GroupSpec p = parse_group_spec("# product\nkind=direct_product_of_free\nranks=2,2\n");
  CHECK(p.ranks == std::vector<int>{2, 2});
  CHECK(parse_group_spec(format_group_spec(p)).ranks == p.ranks);
  CHECK_THROWS_AS(parse_group_spec("kind=free\nrank=2\ncolour=red\n"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("kind=free\nrank=x\n"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("kind=free\nrank=2\nrank=3\n"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("kind=free\nrank\n"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("kind=hyperbolic\nrank=2\n"), ParseError);

  Group f2(s);
  auto o = parse_oracle_spec("quotient=finite_permutation\nimages=a:(1 2),b:(2 3)\n", f2);
  CHECK(o.kind() == OracleKind::finite_quotient_kernel);
  CHECK(o.contains(f2, f2.parse("aa")));
  CHECK_FALSE(o.contains(f2, f2.parse("ab")));
  CHECK(o.contains(f2, f2.parse("ababab")));
  auto i = parse_oracle_spec("quotient=integer\nimages=a:1,b:0\n", f2);
  CHECK(i.contains(f2, f2.parse("bab")) == false);
  CHECK(i.contains(f2, f2.parse("baBA")));
  CHECK(parse_oracle_spec("quotient=commutator\n", f2).kind() == OracleKind::commutator_subgroup);
  auto fp = parse_oracle_spec("quotient=free_product\nfactors=2,3\nimages=a:x1,b:x2\n", f2);
  CHECK(fp.contains(f2, f2.parse("aa")));
  CHECK(fp.contains(f2, f2.parse("bbb")));
  CHECK_FALSE(fp.contains(f2, f2.parse("ab")));
  CHECK_THROWS_AS(parse_oracle_spec("quotient=integer\nimages=a:1\n", f2), ParseError);
  CHECK_THROWS_AS(parse_oracle_spec("quotient=commutator\nimages=a:1\n", f2), ParseError);
  CHECK_THROWS_AS(parse_oracle_spec("quotient=finite_permutation\nimages=a:(1 2),b:(2 2)\n", f2), ParseError);

  Group prod(p);
  auto second = parse_oracle_spec("quotient=free_product\nfactors=0,0\nimages=1.a:e,1.b:e,2.a:x1,2.b:x2\n", prod);
  CHECK(second.contains(prod, prod.parse("(ab,e)")));
  CHECK_FALSE(second.contains(prod, prod.parse("(ab,a)")));
  CHECK(prod.format(prod.parse("(aB, e)")) == "(aB,e)");
}
