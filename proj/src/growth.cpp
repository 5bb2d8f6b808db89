#include "cogrowth/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "cogrowth/errors.hpp"

namespace cogrowth {

std::string to_string(Estimator e) {
  return e == Estimator::slope_regression ? "slope_regression" : "shell_ratio";
}

std::string to_string(SeriesVariant v) {
  switch (v) {
    case SeriesVariant::point: return "point";
    case SeriesVariant::shell: return "shell";
    case SeriesVariant::ball: return "ball";
  }
  return "unknown";
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converging: return "converging";
    case SeriesVerdict::diverging: return "diverging";
    case SeriesVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

ShellCensus census_from_counts(std::vector<double> counts, int delta) {
  if (delta < 1) throw UsageError("shell width must be positive");
  ShellCensus c;
  c.delta = delta;
  c.counts = std::move(counts);
  c.cumulative.resize(c.counts.size());
  double run = 0.0;
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    if (c.counts[i] < 0) throw UsageError("census counts must be non-negative");
    run += c.counts[i];
    c.cumulative[i] = run;
  }
  return c;
}

ShellCensus census_from_norm_counts(const std::vector<std::uint64_t>& per_norm, int delta) {
  if (delta < 1) throw UsageError("shell width must be positive");
  const std::size_t shells = per_norm.size() / static_cast<std::size_t>(delta);
  std::vector<std::uint64_t> exact(shells, 0);
  for (std::size_t n = 0; n < shells * static_cast<std::size_t>(delta); ++n)
    exact[n / static_cast<std::size_t>(delta)] += per_norm[n];
  std::vector<double> counts(exact.begin(), exact.end());
  return census_from_counts(std::move(counts), delta);
}

namespace {

// Depth-first walk over reduced words starting with `first`, carrying the
// quotient image along the stack.
void census_subtree(const NormalSubgroupOracle& oracle, int rank, int r_max, Letter first,
                    std::vector<std::uint64_t>& counts) {
  const int letters = 2 * rank;
  std::vector<QuotientState> states(static_cast<std::size_t>(r_max) + 1);
  std::vector<int> next(static_cast<std::size_t>(r_max) + 1, 0);
  Word w(static_cast<std::size_t>(r_max) + 1);
  states[0] = oracle.identity();
  states[1] = states[0];
  oracle.apply(states[1], first);
  w[1] = first;
  if (oracle.is_trivial(states[1])) ++counts[1];
  int depth = 1;
  while (depth >= 1) {
    if (depth == r_max) {
      --depth;
      continue;
    }
    int& x = next[static_cast<std::size_t>(depth)];
    if (x == (w[static_cast<std::size_t>(depth)] ^ 1)) ++x;
    if (x >= letters) {
      x = 0;
      --depth;
      continue;
    }
    const std::size_t d = static_cast<std::size_t>(depth) + 1;
    w[d] = static_cast<Letter>(x);
    ++x;
    states[d] = states[d - 1];
    oracle.apply(states[d], w[d]);
    if (oracle.is_trivial(states[d])) ++counts[d];
    depth = static_cast<int>(d);
  }
}

std::vector<std::uint64_t> free_filtered_counts(const NormalSubgroupOracle& oracle, int rank, int r_max,
                                                unsigned threads) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(r_max) + 1, 0);
  counts[0] = 1;
  if (r_max == 0) return counts;
  const int letters = 2 * rank;
  if (threads <= 1) {
    for (int x = 0; x < letters; ++x) census_subtree(oracle, rank, r_max, static_cast<Letter>(x), counts);
    return counts;
  }
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(letters),
                                                  std::vector<std::uint64_t>(counts.size(), 0));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int x = static_cast<int>(t); x < letters; x += static_cast<int>(threads))
        census_subtree(oracle, rank, r_max, static_cast<Letter>(x), partial[static_cast<std::size_t>(x)]);
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& p : partial)
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += p[i];
  return counts;
}

std::vector<std::uint64_t> product_filtered_counts(const Group& group, const NormalSubgroupOracle& oracle,
                                                   int r_max) {
  struct Image {
    int norm;
    QuotientState state;
  };
  auto images = [&](int rank, Letter shift) {
    std::vector<Image> out;
    for (int k = 0; k <= r_max; ++k)
      for_each_reduced_word(rank, k, [&](const Word& w) {
        QuotientState s = oracle.identity();
        for (Letter x : w) oracle.apply(s, static_cast<Letter>(x + shift));
        out.push_back({k, std::move(s)});
      });
    return out;
  };
  const auto left = images(group.spec().ranks[0], 0);
  const auto right = images(group.spec().ranks[1], static_cast<Letter>(2 * group.spec().ranks[0]));
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(r_max) + 1, 0);
  QuotientState scratch;
  for (const auto& u : left) {
    for (const auto& v : right) {
      scratch = u.state;
      oracle.multiply(scratch, v.state);
      if (oracle.is_trivial(scratch)) ++counts[static_cast<std::size_t>(std::max(u.norm, v.norm))];
    }
  }
  return counts;
}

}  // namespace

std::vector<std::uint64_t> norm_counts(const Group& group, int r_max, const NormalSubgroupOracle* filter,
                                       unsigned threads) {
  group.check_radius(r_max);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(r_max) + 1, 0);
  if (filter == nullptr) {
    for (int k = 0; k <= r_max; ++k)
      counts[static_cast<std::size_t>(k)] = group.ball_size(k) - (k > 0 ? group.ball_size(k - 1) : 0);
    return counts;
  }
  filter->check_compatible(group);
  switch (group.kind()) {
    case GroupKind::free: return free_filtered_counts(*filter, group.spec().ranks[0], r_max, threads);
    case GroupKind::direct_product_of_free: return product_filtered_counts(group, *filter, r_max);
    case GroupKind::finitely_presented:
      group.enumerate_ball(r_max, [&](const Element& g) {
        if (filter->contains(group, g)) ++counts[static_cast<std::size_t>(g.norm)];
      });
      return counts;
  }
  return counts;
}

ShellCensus shell_census(const Group& group, int r_max, int delta, const NormalSubgroupOracle* filter) {
  return census_from_norm_counts(norm_counts(group, r_max, filter), delta);
}

namespace {

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Fit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

// Non-empty window [lo, hi] and its top half.
std::pair<int, int> top_half_window(const ShellCensus& census) {
  int lo = -1;
  for (std::size_t i = 0; i < census.size(); ++i)
    if (census.cumulative[i] > 0) {
      lo = static_cast<int>(i);
      break;
    }
  const int hi = static_cast<int>(census.size()) - 1;
  if (lo < 0) return {0, -1};
  const int start = lo + (hi - lo + 1) / 2;
  return {std::min(start, hi - 1), hi};
}

}  // namespace

PureExpCheck purely_exponential_check(const ShellCensus& census, double delta) {
  PureExpCheck out;
  for (std::size_t i = 0; i < census.size(); ++i) {
    if (census.counts[i] <= 0) continue;
    const double model = std::exp(delta * static_cast<double>(census.delta) * static_cast<double>(i));
    const double ratio = census.counts[i] / model;
    out.per_shell.push_back(std::max(ratio, 1.0 / ratio));
    out.shells.push_back(static_cast<int>(i));
  }
  if (out.per_shell.empty()) {
    out.purely_exponential = false;
    return out;
  }
  out.constant = *std::max_element(out.per_shell.begin(), out.per_shell.end());
  // A constant that keeps increasing across the last half of the window, by
  // more than 5% overall, indicates a sub-exponential correction.
  const std::size_t n = out.per_shell.size();
  const std::size_t start = n / 2;
  if (n - start >= 3) {
    bool increasing = true;
    for (std::size_t i = start + 1; i < n; ++i) increasing = increasing && out.per_shell[i] > out.per_shell[i - 1];
    if (increasing && out.per_shell[n - 1] > 1.05 * out.per_shell[start]) out.purely_exponential = false;
  }
  return out;
}

GrowthReport growth_rate(const ShellCensus& census) {
  const auto nonzero = std::count_if(census.counts.begin(), census.counts.end(), [](double c) { return c > 0; });
  if (nonzero < 4) throw UsageError("growth estimation needs at least four non-empty shells");
  auto [lo, hi] = top_half_window(census);
  const double step = static_cast<double>(census.delta);

  GrowthReport report;
  std::vector<double> xs, ys;
  // Radii with an empty shell repeat the previous cumulative value and would
  // bias the slope on sets supported on a sublattice of radii.
  for (int i = lo; i <= hi; ++i) {
    if (census.counts[static_cast<std::size_t>(i)] <= 0) continue;
    xs.push_back(step * i);
    ys.push_back(std::log(census.cumulative[static_cast<std::size_t>(i)]));
  }
  if (xs.size() < 2) throw DiagnosticError("fewer than two non-empty shells in the fitting window");
  Fit fit = least_squares(xs, ys);
  report.regression.delta = fit.slope;
  report.regression.estimator = Estimator::slope_regression;
  report.regression.window_lo = lo;
  report.regression.window_hi = hi;
  report.regression.residual = fit.residual;

  std::vector<double> rates;
  int prev = -1;
  for (int i = lo; i <= hi; ++i) {
    if (census.counts[static_cast<std::size_t>(i)] <= 0) continue;
    if (prev >= 0)
      rates.push_back(std::log(census.counts[static_cast<std::size_t>(i)] /
                               census.counts[static_cast<std::size_t>(prev)]) /
                      (step * (i - prev)));
    prev = i;
  }
  double mean = 0.0, var = 0.0;
  for (double r : rates) mean += r;
  mean = rates.empty() ? std::numeric_limits<double>::quiet_NaN() : mean / static_cast<double>(rates.size());
  for (double r : rates) var += (r - mean) * (r - mean);
  report.shell_ratio.delta = mean;
  report.shell_ratio.estimator = Estimator::shell_ratio;
  report.shell_ratio.window_lo = lo;
  report.shell_ratio.window_hi = hi;
  report.shell_ratio.residual = rates.empty() ? 0.0 : std::sqrt(var / static_cast<double>(rates.size()));

  report.regression.pure_exp_constant = purely_exponential_check(census, report.regression.delta).constant;
  report.shell_ratio.pure_exp_constant = purely_exponential_check(census, report.shell_ratio.delta).constant;
  return report;
}

SeriesPartial poincare_partial(const ShellCensus& census, double s, SeriesVariant variant, int terms) {
  if (terms < 0 || static_cast<std::size_t>(terms) > census.size())
    throw UsageError("number of terms exceeds the census length");
  if (variant == SeriesVariant::point && census.delta != 1)
    throw UsageError("the point series needs a census with unit shells");
  SeriesPartial out;
  std::vector<double> inc;
  double sum = 0.0;
  for (int i = 0; i < terms; ++i) {
    const double base = variant == SeriesVariant::ball ? census.cumulative[static_cast<std::size_t>(i)]
                                                       : census.counts[static_cast<std::size_t>(i)];
    const double term = base * std::exp(-s * census.delta * i);
    sum += term;
    out.partial_sums.push_back(sum);
    inc.push_back(term);
  }

  // Geometric trend of the non-zero increments over the second half.
  std::vector<double> xs, ys;
  for (int i = terms / 2; i < terms; ++i) {
    if (inc[static_cast<std::size_t>(i)] <= 0) continue;
    xs.push_back(static_cast<double>(census.delta) * i);
    ys.push_back(std::log(inc[static_cast<std::size_t>(i)]));
  }
  if (xs.size() < 2) {
    out.verdict = sum == 0.0 || xs.empty() ? SeriesVerdict::converging : SeriesVerdict::inconclusive;
    return out;
  }
  const double lambda = least_squares(xs, ys).slope;
  out.tail_slope = lambda;
  constexpr double kFlat = 1e-4;
  if (lambda < -kFlat) {
    out.verdict = SeriesVerdict::converging;
  } else if (lambda > kFlat) {
    out.verdict = SeriesVerdict::diverging;
  } else {
    const double hi = *std::max_element(ys.begin(), ys.end());
    const double lo = *std::min_element(ys.begin(), ys.end());
    out.verdict = hi - lo > std::log(2.0) ? SeriesVerdict::inconclusive : SeriesVerdict::diverging;
  }
  return out;
}

}  // namespace cogrowth
