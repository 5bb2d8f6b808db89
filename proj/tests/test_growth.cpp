#include <cmath>
#include <random>

#include "cogrowth/errors.hpp"
#include "cogrowth/growth.hpp"
#include "doctest.h"

using namespace cogrowth;

namespace {

Group free_group(int rank, int bound = 16) {
  GroupSpec s;
  s.ranks = {rank};
  s.radius_bound = bound;
  return Group(s);
}

ShellCensus geometric(double delta, int n, double scale = 1.0) {
  std::vector<double> counts;
  for (int r = 0; r < n; ++r) counts.push_back(std::round(scale * std::exp(delta * r)));
  return census_from_counts(counts, 1);
}

}  // namespace

TEST_CASE("census shells and cumulative counts are consistent") {
  Group f2 = free_group(2);
  ShellCensus c = shell_census(f2, 3, 1);
  CHECK(c.counts == std::vector<double>{1, 4, 12, 36});
  CHECK(c.cumulative == std::vector<double>{1, 5, 17, 53});

  ShellCensus wide = shell_census(f2, 9, 3);
  REQUIRE(wide.size() == 3);
  CHECK(wide.counts[0] == 17);
  CHECK(wide.counts[1] == 36 + 108 + 324);
  double run = 0;
  for (std::size_t i = 0; i < wide.size(); ++i) {
    run += wide.counts[i];
    CHECK(wide.cumulative[i] == run);
  }
  // Incomplete trailing shells are dropped.
  CHECK(shell_census(f2, 10, 3).size() == 3);
}

TEST_CASE("free group growth rate is log 3 and purely exponential") {
  Group f2 = free_group(2);
  ShellCensus c = shell_census(f2, 14, 1);
  GrowthReport g = growth_rate(c);
  CHECK(std::abs(g.regression.delta - std::log(3.0)) < 0.01);
  CHECK(std::abs(g.shell_ratio.delta - std::log(3.0)) < 1e-12);
  CHECK(g.regression.window_hi == 14);
  CHECK(g.regression.window_lo == 7);
  PureExpCheck pe = purely_exponential_check(c, std::log(3.0));
  CHECK(pe.purely_exponential);
  CHECK(pe.constant == doctest::Approx(4.0 / 3.0));
  CHECK(pe.constant <= 1.5);
}

TEST_CASE("product growth rate is 2 log 3") {
  GroupSpec s;
  s.kind = GroupKind::direct_product_of_free;
  s.ranks = {2, 2};
  s.radius_bound = 8;
  ShellCensus c = shell_census(Group(s), 7, 1);
  CHECK(c.cumulative.back() == (2.0 * 2187 - 1) * (2.0 * 2187 - 1));
  CHECK(std::abs(growth_rate(c).regression.delta - 2 * std::log(3.0)) < 0.05);
}

TEST_CASE("rank one free group has zero growth rate") {
  ShellCensus c = shell_census(free_group(1, 400), 400, 1);
  GrowthReport g = growth_rate(c);
  CHECK(g.shell_ratio.delta == 0.0);
  CHECK(std::abs(g.regression.delta) < 0.01);
}

TEST_CASE("integer kernel census is not purely exponential") {
  Group f2 = free_group(2);
  auto z = NormalSubgroupOracle::integer({1, 0});
  ShellCensus c = shell_census(f2, 14, 1, &z);
  CHECK_FALSE(purely_exponential_check(c, std::log(3.0)).purely_exponential);
  ShellCensus full = shell_census(f2, 14, 1);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.counts[i] <= full.counts[i]);
}

TEST_CASE("growth estimation needs four non-empty shells") {
  CHECK_THROWS_AS(growth_rate(census_from_counts({1, 4, 12}, 1)), UsageError);
  CHECK_THROWS_AS(growth_rate(census_from_counts({1, 0, 0, 0, 0, 7, 0}, 1)), UsageError);
}

TEST_CASE("synthetic geometric censuses recover their rate") {
  for (double delta : {0.3, 0.55, 1.0, std::log(3.0)}) {
    ShellCensus c = geometric(delta, 60, 1e6);
    GrowthReport g = growth_rate(c);
    CHECK(g.regression.delta == doctest::Approx(delta).epsilon(1e-3));
    CHECK(g.shell_ratio.delta == doctest::Approx(delta).epsilon(1e-3));
  }
}

TEST_CASE("Poincare series dichotomy on censuses with known rate") {
  for (double delta : {0.3, 0.55, std::log(3.0)}) {
    ShellCensus c = geometric(delta, 80, 1e6);
    for (auto v : {SeriesVariant::point, SeriesVariant::shell, SeriesVariant::ball}) {
      CHECK(poincare_partial(c, delta + 0.05, v, 80).verdict == SeriesVerdict::converging);
      CHECK(poincare_partial(c, delta - 0.05, v, 80).verdict == SeriesVerdict::diverging);
    }
  }
  Group f2 = free_group(2);
  ShellCensus c = shell_census(f2, 14, 1);
  SeriesPartial at = poincare_partial(c, std::log(3.0), SeriesVariant::shell, 15);
  CHECK(at.verdict == SeriesVerdict::diverging);
  for (std::size_t i = 1; i < at.partial_sums.size(); ++i)
    CHECK(at.partial_sums[i] >= at.partial_sums[i - 1]);
  CHECK(poincare_partial(c, 1.2, SeriesVariant::point, 15).verdict == SeriesVerdict::converging);
  CHECK_THROWS_AS(poincare_partial(c, 1.0, SeriesVariant::point, 16), UsageError);
  CHECK_THROWS_AS(poincare_partial(shell_census(f2, 9, 3), 1.0, SeriesVariant::point, 2), UsageError);
}
