#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cogrowth/group.hpp"
#include "cogrowth/oracle.hpp"

namespace cogrowth {

/// Counts of a subset Y by Delta-shell: counts[i] = #{y : i*Delta <= |y| < (i+1)*Delta},
/// cumulative[i] = counts[0] + ... + counts[i]. Values are integral; they are
/// stored as doubles so synthetic censuses may exceed 2^64.
struct ShellCensus {
  int delta = 1;
  std::vector<double> counts;
  std::vector<double> cumulative;

  std::size_t size() const { return counts.size(); }
};

/// Builds a census from exact per-norm counts. Only complete shells are kept.
ShellCensus census_from_norm_counts(const std::vector<std::uint64_t>& per_norm, int delta);
ShellCensus census_from_counts(std::vector<double> counts, int delta);

/// Exact per-norm counts of the ball of radius r_max, optionally restricted
/// to a normal subgroup. Throws ResourceError above the radius bound.
std::vector<std::uint64_t> norm_counts(const Group& group, int r_max,
                                       const NormalSubgroupOracle* filter = nullptr,
                                       unsigned threads = 0);

ShellCensus shell_census(const Group& group, int r_max, int delta,
                         const NormalSubgroupOracle* filter = nullptr);

enum class Estimator { slope_regression, shell_ratio };
std::string to_string(Estimator e);

struct GrowthEstimate {
  double delta = 0.0;
  Estimator estimator = Estimator::slope_regression;
  /// Inclusive shell indices used for the fit.
  int window_lo = 0;
  int window_hi = 0;
  double residual = 0.0;
  /// Constant C with C^-1 e^{delta r} <= counts <= C e^{delta r} over the window.
  double pure_exp_constant = 0.0;
};

struct GrowthReport {
  GrowthEstimate regression;
  GrowthEstimate shell_ratio;
};

/// Fits log cumulative counts against radius over the non-empty shells in the top half of the
/// non-empty window, and averages log shell ratios over the same window.
/// Requires at least four non-empty shells.
GrowthReport growth_rate(const ShellCensus& census);

struct PureExpCheck {
  bool purely_exponential = true;
  double constant = 0.0;
  /// max(counts/e^{delta r}, e^{delta r}/counts) per non-empty shell.
  std::vector<double> per_shell;
  std::vector<int> shells;
};

/// Smallest C bounding the non-empty shells by C^{+-1} e^{delta r}; flags
/// failure when the per-shell constant keeps growing over the last half.
PureExpCheck purely_exponential_check(const ShellCensus& census, double delta);

enum class SeriesVariant { point, shell, ball };
enum class SeriesVerdict { converging, diverging, inconclusive };
std::string to_string(SeriesVariant v);
std::string to_string(SeriesVerdict v);

struct SeriesPartial {
  std::vector<double> partial_sums;
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
  /// Fitted log-slope of the tail increments.
  double tail_slope = 0.0;
};

/// Partial sums of a Poincare-type series over the first `terms` shells.
SeriesPartial poincare_partial(const ShellCensus& census, double s, SeriesVariant variant, int terms);

}  // namespace cogrowth
