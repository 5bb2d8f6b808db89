#include "cogrowth/projection_axioms.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "cogrowth/errors.hpp"
#include "cogrowth/parallel.hpp"

namespace cogrowth {

namespace {

long span_distance(long step, const AxisSpan& a, const AxisSpan& b) {
  if (a.self || b.self) return kUnboundedProjection;
  return (std::max(a.hi, b.hi) - std::min(a.lo, b.lo)) * step;
}

AxiomViolation violation(std::string axiom, std::initializer_list<const Axis*> axes, std::vector<long> values) {
  AxiomViolation v;
  v.axiom = std::move(axiom);
  for (const Axis* a : axes) v.witness.push_back(a->coset_rep);
  v.values = std::move(values);
  return v;
}

void record(AxiomReport& report, AxiomViolation v, std::size_t max_witnesses) {
  ++report.violation_count;
  if (report.violations.size() < max_witnesses) report.violations.push_back(std::move(v));
}

// Distinct indices drawn uniformly from [0, n).
template <std::size_t N>
std::array<std::size_t, N> distinct_indices(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::array<std::size_t, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    for (bool fresh = false; !fresh;) {
      out[i] = pick(rng);
      fresh = std::find(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(i), out[i]) ==
              out.begin() + static_cast<std::ptrdiff_t>(i);
    }
  }
  return out;
}

}  // namespace

long axis_proj_distance(const Group& group, const Axis& y, const Axis& x, const Axis& z) {
  if (x == y || z == y) return kUnboundedProjection;
  return span_distance(y.step, project_axis(group, y, x), project_axis(group, y, z));
}

AxisFamily axis_family(const Group& group, const Element& root, int radius) {
  if (!group.is_free()) throw UsageError("axis families are implemented for free groups");
  AxisFamily family;
  family.root = root;
  family.radius = radius;
  group.enumerate_ball(radius, [&](const Element& g) { family.axes.push_back(make_axis(group, root, g)); });
  auto less = [&](const Axis& a, const Axis& b) { return group.element_less(a.coset_rep, b.coset_rep); };
  std::sort(family.axes.begin(), family.axes.end(), less);
  family.axes.erase(std::unique(family.axes.begin(), family.axes.end()), family.axes.end());
  return family;
}

ProjectionTable::ProjectionTable(const Group& group, const AxisFamily& family, unsigned threads)
    : n_(family.axes.size()), step_(family.root.norm), lo_(n_ * n_, 0), hi_(n_ * n_, 0) {
  parallel_for(n_, threads, [&](std::size_t y, unsigned) {
    for (std::size_t x = 0; x < n_; ++x) {
      if (x == y) continue;
      AxisSpan s = project_axis(group, family.axes[y], family.axes[x]);
      if (s.self) throw DiagnosticError("distinct family axes project with infinite diameter");
      lo_[y * n_ + x] = s.lo;
      hi_[y * n_ + x] = s.hi;
    }
  });
}

long ProjectionTable::distance(std::size_t y, std::size_t x, std::size_t z) const {
  if (x == y || z == y) return kUnboundedProjection;
  const std::size_t a = y * n_ + x, b = y * n_ + z;
  return (std::max(hi_[a], hi_[b]) - std::min(lo_[a], lo_[b])) * step_;
}

AxiomReport check_P0(const AxisFamily& family, const ProjectionTable& table) {
  AxiomReport report;
  report.axiom = "P0";
  const std::size_t n = table.size();
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      ++report.sample_size;
      const long v = table.distance(y, x, x);
      if (!report.maximizer || v > report.theta) {
        report.theta = v;
        report.maximizer = std::make_pair(family.axes[y].coset_rep, family.axes[x].coset_rep);
      }
    }
  report.theta_prime = 11 * report.theta;
  return report;
}

AxiomReport check_P1(const AxisFamily& family, const ProjectionTable& table, long theta,
                     const AxiomOptions& options) {
  AxiomReport report;
  report.axiom = "P1";
  report.theta = theta;
  report.theta_prime = 11 * theta;
  const std::size_t n = table.size();
  if (n < 3) return report;
  const auto& axes = family.axes;
  auto test = [&](std::size_t x, std::size_t y, std::size_t z, AxiomReport& out) {
    ++out.sample_size;
    const long dy = table.distance(y, x, z);
    if (dy <= theta) return;
    ++out.conditional_checks;
    const long dx = table.distance(x, y, z);
    if (dx > theta) record(out, violation("P1", {&axes[x], &axes[y], &axes[z]}, {dy, dx}), options.max_witnesses);
  };
  const double triples = static_cast<double>(n) * static_cast<double>(n - 1) * static_cast<double>(n - 2);
  if (triples <= static_cast<double>(options.tuple_budget)) {
    std::vector<AxiomReport> per_y(n);
    parallel_for(n, options.threads, [&](std::size_t y, unsigned) {
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = 0; z < n; ++z)
          if (x != y && z != y && x != z) test(x, y, z, per_y[y]);
    });
    for (auto& part : per_y) {
      report.sample_size += part.sample_size;
      report.conditional_checks += part.conditional_checks;
      report.violation_count += part.violation_count;
      for (auto& v : part.violations)
        if (report.violations.size() < options.max_witnesses) report.violations.push_back(std::move(v));
    }
    return report;
  }
  report.exhaustive = false;
  std::mt19937_64 rng(options.seed);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    auto [x, y, z] = distinct_indices<3>(rng, n);
    test(x, y, z, report);
  }
  return report;
}

AxiomReport check_SP(const Group& group, const AxisFamily& family, const ProjectionTable& table, long theta,
                     const AxiomOptions& options) {
  AxiomReport report;
  report.axiom = "SP";
  report.theta = theta;
  report.theta_prime = 11 * theta;
  const long premise = report.theta_prime + 2 * theta;
  const long slack = 4 * theta;
  const std::size_t n = table.size();
  const auto& axes = family.axes;

  // SP4 on every pair.
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      ++report.sample_size;
      const long v = table.distance(y, x, x);
      if (v > report.theta_prime)
        record(report, violation("SP4", {&axes[y], &axes[x]}, {v}), options.max_witnesses);
    }

  // SP3 on random quadruples (X, Y, Z distinct, W != Z).
  if (n >= 3) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::uint64_t s = 0; s < options.samples; ++s) {
      auto [x, y, z] = distinct_indices<3>(rng, n);
      std::size_t w = pick(rng);
      while (w == z) w = pick(rng);
      ++report.sample_size;
      const long dy = table.distance(y, x, z);
      if (dy <= premise) continue;
      ++report.conditional_checks;
      const long a = table.distance(z, x, w), b = table.distance(z, y, w);
      if (std::abs(a - b) > slack)
        record(report, violation("SP3", {&axes[x], &axes[y], &axes[z], &axes[w]}, {dy, a, b}), options.max_witnesses);
    }
  }

  // SP3 on chained translates X = h c^-m s E, Y = h E, Z = h c^m t E, where
  // the premise holds by construction once |c^m| is large.
  const Element& root = family.root;
  const long m0 = premise / std::max(1L, 2L * root.norm) + 2;
  std::vector<Element> shifts;
  group.enumerate_ball(std::min(2, family.radius), [&](const Element& h) { shifts.push_back(h); });
  const std::size_t w_count = std::min<std::size_t>(n, 48);
  const int letters = 2 * group.abstract_rank();
  struct Chain {
    Axis x, y, z;
  };
  std::vector<Chain> chains;
  for (const Element& h : shifts)
    for (long m = m0; m < m0 + 2; ++m)
      for (int s = 0; s < letters; ++s)
        for (int t = 0; t < letters; ++t) {
          const Element ls = group.make(Word{static_cast<Letter>(s)});
          const Element lt = group.make(Word{static_cast<Letter>(t)});
          const Element back = group.make(power_word(root.first, -m));
          const Element fwd = group.make(power_word(root.first, m));
          Chain c{make_axis(group, root, group.multiply(h, group.multiply(back, ls))), make_axis(group, root, h),
                  make_axis(group, root, group.multiply(h, group.multiply(fwd, lt)))};
          if (c.x == c.y || c.y == c.z || c.x == c.z) continue;
          chains.push_back(std::move(c));
        }
  std::vector<AxiomReport> per_chain(chains.size());
  parallel_for(chains.size(), options.threads, [&](std::size_t i, unsigned) {
    const Chain& c = chains[i];
    AxiomReport& out = per_chain[i];
    const long dy = axis_proj_distance(group, c.y, c.x, c.z);
    const Element h = c.y.coset_rep;
    for (std::size_t j = 0; j < w_count + 2; ++j) {
      const Axis w = j < w_count ? make_axis(group, root, group.multiply(h, axes[j].coset_rep))
                                 : (j == w_count ? c.x : c.y);
      if (w == c.z) continue;
      ++out.sample_size;
      if (dy <= premise) continue;
      ++out.conditional_checks;
      const long a = axis_proj_distance(group, c.z, c.x, w), b = axis_proj_distance(group, c.z, c.y, w);
      if (std::abs(a - b) > slack)
        record(out, violation("SP3", {&c.x, &c.y, &c.z, &w}, {dy, a, b}), options.max_witnesses);
    }
  });
  for (auto& part : per_chain) {
    report.sample_size += part.sample_size;
    report.conditional_checks += part.conditional_checks;
    report.violation_count += part.violation_count;
    for (auto& v : part.violations)
      if (report.violations.size() < options.max_witnesses) report.violations.push_back(std::move(v));
  }
  report.exhaustive = false;
  return report;
}

std::vector<bool> order_conditions(const Group& group, const Axis& x, const Axis& z, const Axis& y0, const Axis& y1,
                                   long theta_prime) {
  return {axis_proj_distance(group, y0, x, y1) > theta_prime, axis_proj_distance(group, y1, x, y0) <= theta_prime,
          axis_proj_distance(group, y1, y0, z) > theta_prime, axis_proj_distance(group, y0, y1, z) <= theta_prime};
}

OrderCheck order_interval(const Group& group, const Axis& x, const Axis& z, std::span<const Axis> family, long theta) {
  const long theta_prime = 11 * theta;
  OrderCheck out;
  std::vector<Axis> all{x};
  for (const Axis& y : family) {
    if (y == x || y == z) continue;
    if (std::find(all.begin(), all.end(), y) != all.end()) continue;
    if (axis_proj_distance(group, y, x, z) > 2 * theta_prime + 2 * theta) all.push_back(y);
  }
  all.push_back(z);
  const std::size_t m = all.size();

  // spans[i][j]: projection of axis j onto axis i.
  std::vector<AxisSpan> spans(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) spans[i * m + j] = i == j ? AxisSpan{true, 0, 0} : project_axis(group, all[i], all[j]);
  const long step = x.step;
  auto d = [&](std::size_t y, std::size_t a, std::size_t b) {
    return span_distance(step, spans[y * m + a], spans[y * m + b]);
  };
  const std::size_t X = 0, Z = m - 1;

  // before[i * m + j]: all[i] precedes all[j] by the first condition.
  std::vector<char> before(m * m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const bool c[4] = {d(i, X, j) > theta_prime, d(j, X, i) <= theta_prime, d(j, i, Z) > theta_prime,
                         d(i, j, Z) <= theta_prime};
      ++out.comparable_pairs;
      before[i * m + j] = c[0];
      if (c[0] == c[1] && c[1] == c[2] && c[2] == c[3]) {
        ++out.agreeing_pairs;
      } else {
        out.violations.push_back({"order-conditions",
                                  {all[i].coset_rep, all[j].coset_rep},
                                  {d(i, X, j), d(j, X, i), d(j, i, Z), d(i, j, Z)}});
      }
    }

  std::vector<std::size_t> rank(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (before[i * m + j] == before[j * m + i])
        out.violations.push_back({"order-total", {all[i].coset_rep, all[j].coset_rep}, {}});
      if (before[i * m + j]) ++rank[j];
      if (before[j * m + i]) ++rank[i];
    }
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  for (std::size_t k = 0; k < m; ++k)
    if (rank[idx[k]] != k) {
      out.violations.push_back({"order-transitive", {all[idx[k]].coset_rep}, {static_cast<long>(rank[idx[k]])}});
      break;
    }
  if (idx.front() != X || idx.back() != Z)
    out.violations.push_back({"order-endpoints", {all[idx.front()].coset_rep, all[idx.back()].coset_rep}, {}});

  // d_Y1(Y0, Y2) = d_Y1(X, Z) up to 4 theta for Y0 < Y1 < Y2.
  for (std::size_t b = 1; b + 1 < m; ++b) {
    const std::size_t y1 = idx[b];
    const long ref = d(y1, X, Z);
    for (std::size_t a = 0; a < b; ++a)
      for (std::size_t c = b + 1; c < m; ++c) {
        ++out.monotone_checks;
        const long v = d(y1, idx[a], idx[c]);
        if (std::abs(v - ref) > 4 * theta)
          out.violations.push_back(
              {"order-monotone", {all[idx[a]].coset_rep, all[y1].coset_rep, all[idx[c]].coset_rep}, {v, ref}});
      }
  }
  for (std::size_t i : idx) out.order.push_back(all[i]);
  return out;
}

}  // namespace cogrowth
