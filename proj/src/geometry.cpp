#include "cogrowth/geometry.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "cogrowth/errors.hpp"

namespace cogrowth {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::measured: return "measured";
    case Provenance::asserted: return "asserted";
    case Provenance::derived: return "derived-closed-form";
  }
  return "unknown";
}

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long phase(long position, long step) {
  long r = position % step;
  return r < 0 ? r + step : r;
}

// Reduced rep^-1 * x for reduced words.
Word relative_word(std::span<const Letter> rep, std::span<const Letter> x) {
  std::size_t k = common_prefix(rep, x);
  Word y;
  y.reserve(rep.size() + x.size() - 2 * k);
  for (std::size_t i = rep.size(); i > k; --i) y.push_back(inverse_letter(rep[i - 1]));
  y.insert(y.end(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
  return y;
}

// Word of the line point at a signed position.
Word line_point(std::span<const Letter> root, long position) {
  const long step = static_cast<long>(root.size());
  Word w;
  w.reserve(static_cast<std::size_t>(position < 0 ? -position : position));
  if (position >= 0) {
    for (long i = 0; i < position; ++i) w.push_back(root[static_cast<std::size_t>(i % step)]);
  } else {
    for (long i = 0; i < -position; ++i)
      w.push_back(inverse_letter(root[static_cast<std::size_t>(step - 1 - i % step)]));
  }
  return w;
}

bool is_cyclically_reduced_root(const Group& group, const Element& root) {
  if (root.norm == 0) return false;
  if (group.is_free()) return is_cyclically_reduced(root.first);
  if (group.is_product()) return is_cyclically_reduced(root.first) && is_cyclically_reduced(root.second);
  return false;
}

Element power(const Group& group, const Element& root, long k) {
  if (group.is_free()) return group.make(power_word(root.first, k));
  return group.make(power_word(root.first, k), power_word(root.second, k));
}

}  // namespace

LineFoot line_foot(std::span<const Letter> y, std::span<const Letter> root) {
  const std::size_t step = root.size();
  std::size_t plus = 0;
  while (plus < y.size() && y[plus] == root[plus % step]) ++plus;
  LineFoot f;
  if (plus > 0) {
    f.position = static_cast<long>(plus);
  } else {
    std::size_t minus = 0;
    while (minus < y.size() && y[minus] == inverse_letter(root[step - 1 - minus % step])) ++minus;
    f.position = -static_cast<long>(minus);
  }
  f.off_line = static_cast<long>(y.size()) - (f.position < 0 ? -f.position : f.position);
  return f;
}

ExponentSpan nearest_exponents(const LineFoot& foot, long step) {
  const long m = floor_div(foot.position, step);
  const long r = foot.position - m * step;
  if (r == 0) return {m, m, foot.off_line};
  if (2 * r < step) return {m, m, foot.off_line + r};
  if (2 * r > step) return {m + 1, m + 1, foot.off_line + step - r};
  return {m, m + 1, foot.off_line + r};
}

ExponentSpan project_free(std::span<const Letter> rep, std::span<const Letter> root, std::span<const Letter> x) {
  if (rep.empty()) return nearest_exponents(line_foot(x, root), static_cast<long>(root.size()));
  Word y = relative_word(rep, x);
  return nearest_exponents(line_foot(y, root), static_cast<long>(root.size()));
}

Word canonical_coset_rep(std::span<const Letter> g, std::span<const Letter> root) {
  Word g_inv = inverse_word(g);
  ExponentSpan s = nearest_exponents(line_foot(g_inv, root), static_cast<long>(root.size()));
  Word best;
  for (long k = s.lo; k <= s.hi; ++k) {
    Word cand = multiply_words(g, power_word(root, k));
    if (k == s.lo || shortlex_less(cand, best)) best = std::move(cand);
  }
  return best;
}

AxisSpan project_axis_free(std::span<const Letter> onto_rep, std::span<const Letter> other_rep,
                           std::span<const Letter> root) {
  const long step = static_cast<long>(root.size());
  Word u = relative_word(onto_rep, other_rep);
  // Nearest point q of the other line to the base point of this one.
  Word u_inv = inverse_word(u);
  const long s_other = line_foot(u_inv, root).position;
  Word q = multiply_words(u, line_point(root, s_other));
  const LineFoot fq = line_foot(q, root);
  AxisSpan out;
  if (fq.off_line > 0) {
    ExponentSpan e = nearest_exponents(fq, step);
    out.lo = e.lo;
    out.hi = e.hi;
    return out;
  }
  // The lines meet at q; measure the overlap in both directions.
  auto fwd_letter = [&](long pos, long i) { return root[static_cast<std::size_t>(phase(pos + i, step))]; };
  auto back_letter = [&](long pos, long i) {
    return inverse_letter(root[static_cast<std::size_t>(phase(pos - 1 - i, step))]);
  };
  const long s_q = fq.position;
  auto overlap = [&](bool other_forward, bool this_forward) {
    long n = 0;
    while (n <= step) {
      Letter a = other_forward ? fwd_letter(s_other, n) : back_letter(s_other, n);
      Letter b = this_forward ? fwd_letter(s_q, n) : back_letter(s_q, n);
      if (a != b) break;
      ++n;
    }
    return n;
  };
  const long ff = overlap(true, true), bf = overlap(false, true);
  const long fb = overlap(true, false), bb = overlap(false, false);
  if (std::max({ff, bf, fb, bb}) >= step) {
    out.self = true;
    return out;
  }
  const long forward = std::max(ff, bf);
  const long backward = std::max(fb, bb);
  out.lo = nearest_exponents({s_q - backward, 0}, step).lo;
  out.hi = nearest_exponents({s_q + forward, 0}, step).hi;
  return out;
}

Axis make_axis(const Group& group, const Element& root, const Element& g) {
  if (!group.is_free() && !group.is_product())
    throw UsageError("axes are only available for free groups and their products");
  if (!is_cyclically_reduced_root(group, root))
    throw UsageError("axis root must be non-trivial and cyclically reduced");
  Axis a;
  a.root = root;
  a.step = root.norm;
  if (group.is_free()) {
    a.coset_rep = group.make(canonical_coset_rep(g.first, root.first));
    return a;
  }
  a.coset_rep = g;
  ProjectionSet p = project_brute_force(group, a, group.identity());
  Element best;
  for (std::size_t i = 0; i < p.exponents.size(); ++i) {
    Element cand = orbit_point(group, a, p.exponents[i]);
    if (i == 0 || group.element_less(cand, best)) best = std::move(cand);
  }
  a.coset_rep = best;
  return a;
}

Element orbit_point(const Group& group, const Axis& axis, long k) {
  return group.multiply(axis.coset_rep, power(group, axis.root, k));
}

ProjectionSet project_brute_force(const Group& group, const Axis& axis, const Element& x,
                                  const WindowOptions& options) {
  // d(x, g c^k) >= |k| step - d(x, g), so every minimiser lies in the window.
  const Element rel_inv = group.multiply(group.inverse(x), axis.coset_rep);
  const long d0 = rel_inv.norm;
  const long window = (2 * d0 + axis.step - 1) / axis.step + 2;
  if (window > options.max_window)
    throw ResourceError("projection window of " + std::to_string(window) + " exceeds the cap");
  ProjectionSet out;
  out.distance = std::numeric_limits<long>::max();
  std::vector<std::pair<long, long>> dist;
  const Element root_inv = group.inverse(axis.root);
  Element cur = rel_inv;
  for (long k = 0; k <= window; ++k) {
    dist.emplace_back(k, cur.norm);
    cur = group.multiply(cur, axis.root);
  }
  cur = group.multiply(rel_inv, root_inv);
  for (long k = -1; k >= -window; --k) {
    dist.emplace_back(k, cur.norm);
    cur = group.multiply(cur, root_inv);
  }
  for (const auto& [k, d] : dist) out.distance = std::min(out.distance, d);
  for (const auto& [k, d] : dist)
    if (d == out.distance) out.exponents.push_back(k);
  std::sort(out.exponents.begin(), out.exponents.end());
  return out;
}

ProjectionSet project(const Group& group, const Axis& axis, const Element& x, const WindowOptions& options) {
  if (!group.is_free()) return project_brute_force(group, axis, x, options);
  ExponentSpan s = project_free(axis.coset_rep.first, axis.root.first, x.first);
  ProjectionSet out;
  for (long k = s.lo; k <= s.hi; ++k) out.exponents.push_back(k);
  out.distance = s.distance;
  return out;
}

std::vector<Element> projection_points(const Group& group, const Axis& axis, const ProjectionSet& p) {
  std::vector<Element> out;
  for (long k : p.exponents) out.push_back(orbit_point(group, axis, k));
  return out;
}

long proj_distance(const Axis& axis, const ProjectionSet& a, const ProjectionSet& b) {
  return (std::max(a.hi(), b.hi()) - std::min(a.lo(), b.lo())) * axis.step;
}

long proj_distance(const Group& group, const Axis& axis, std::span<const Element> a, std::span<const Element> b) {
  long lo = std::numeric_limits<long>::max();
  long hi = std::numeric_limits<long>::min();
  for (auto set : {a, b})
    for (const Element& x : set) {
      ProjectionSet p = project(group, axis, x);
      lo = std::min(lo, p.lo());
      hi = std::max(hi, p.hi());
    }
  if (lo > hi) return 0;
  return (hi - lo) * axis.step;
}

AxisSpan project_axis(const Group& group, const Axis& onto, const Axis& other) {
  if (!group.is_free()) throw UsageError("axis-to-axis projection is implemented for free groups");
  if (!(onto.root == other.root)) throw UsageError("axes must be translates of the same orbit");
  return project_axis_free(onto.coset_rep.first, other.coset_rep.first, onto.root.first);
}

namespace {

struct BallProjections {
  std::vector<Element> ball;
  std::vector<std::uint32_t> position_of_index;  // ball_index -> position
  std::vector<long> lo, hi, dist;
};

BallProjections project_ball(const Group& group, const Axis& axis, int radius) {
  BallProjections b;
  b.ball = group.ball(radius);
  const std::size_t n = b.ball.size();
  b.position_of_index.assign(n, 0);
  b.lo.resize(n);
  b.hi.resize(n);
  b.dist.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.position_of_index[group.ball_index(b.ball[i], radius)] = static_cast<std::uint32_t>(i);
    ProjectionSet p = project(group, axis, b.ball[i]);
    b.lo[i] = p.lo();
    b.hi[i] = p.hi();
    b.dist[i] = p.distance;
  }
  return b;
}

}  // namespace

ContractionMeasurement measure_contraction(const Group& group, const Axis& axis, int radius,
                                           const ContractionOptions& options) {
  group.check_radius(radius);
  BallProjections b = project_ball(group, axis, radius);
  const std::size_t n = b.ball.size();

  // Displacements h with |h| <= min(d(x, Y), 2 radius); x' = x h.
  std::vector<int> reach(n);
  int max_reach = 0;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    reach[i] = static_cast<int>(std::min<long>(b.dist[i], 2L * radius));
    reach[i] = std::min(reach[i], group.radius_bound());
    max_reach = std::max(max_reach, reach[i]);
    total += group.ball_size(reach[i]);
  }
  const std::vector<Element> moves = group.ball(max_reach);

  ContractionMeasurement m;
  m.exhaustive = total <= options.pair_budget;
  m.per_radius.assign(static_cast<std::size_t>(radius) + 1, 0);
  long best = -1;
  std::mt19937_64 rng(options.seed);
  auto visit = [&](std::size_t i, const Element& h) {
    Element y = group.multiply(b.ball[i], h);
    if (y.norm > radius) return;
    const std::size_t j = b.position_of_index[group.ball_index(y, radius)];
    const long diam = (std::max(b.hi[i], b.hi[j]) - std::min(b.lo[i], b.lo[j])) * axis.step;
    const std::size_t r = static_cast<std::size_t>(std::max(b.ball[i].norm, y.norm));
    m.per_radius[r] = std::max(m.per_radius[r], diam);
    ++m.pairs;
    if (diam > best) {
      best = diam;
      m.witness = std::make_pair(b.ball[i], y);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t size = group.ball_size(reach[i]);
    if (m.exhaustive) {
      for (std::uint64_t k = 0; k < size; ++k) visit(i, moves[k]);
    } else {
      const std::uint64_t samples = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(static_cast<double>(options.pair_budget) * static_cast<double>(size) /
                                        static_cast<double>(total)));
      std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
      for (std::uint64_t k = 0; k < samples; ++k) visit(i, moves[pick(rng)]);
    }
  }
  for (std::size_t r = 1; r < m.per_radius.size(); ++r)
    m.per_radius[r] = std::max(m.per_radius[r], m.per_radius[r - 1]);
  m.C = m.per_radius.back();
  if (radius >= 2) {
    const auto& c = m.per_radius;
    const std::size_t last = c.size() - 1;
    m.contracting = c[last] == c[last - 1] && c[last - 1] == c[last - 2];
  }
  return m;
}

BgiMeasurement measure_bgi(const Group& group, const Axis& axis, int radius, long C,
                           const ContractionOptions& options) {
  group.check_radius(radius);
  BallProjections b = project_ball(group, axis, radius);
  const std::size_t n = b.ball.size();
  BgiMeasurement out;

  // Geodesic vertex positions, flattened.
  std::vector<std::uint32_t> verts;
  std::vector<std::size_t> starts{0};
  auto add_geodesic = [&](std::size_t i, std::size_t j) {
    for (const Element& v : group.geodesic(b.ball[i], b.ball[j]))
      verts.push_back(b.position_of_index[group.ball_index(v, radius)]);
    starts.push_back(verts.size());
  };
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  out.exhaustive = pairs <= options.pair_budget;
  if (out.exhaustive) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) add_geodesic(i, j);
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::uint64_t k = 0; k < options.pair_budget; ++k) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i != j) add_geodesic(i, j);
    }
  }
  const std::size_t count = starts.size() - 1;
  out.geodesics = count;

  long max_dist = 0;
  long max_span = 0;
  for (std::size_t i = 0; i < n; ++i) {
    max_dist = std::max(max_dist, b.dist[i]);
    max_span = std::max(max_span, b.hi[i] - b.lo[i]);
  }
  long global_lo = *std::min_element(b.lo.begin(), b.lo.end());
  long global_hi = *std::max_element(b.hi.begin(), b.hi.end());
  const long cap = std::max(C, (global_hi - global_lo) * axis.step + max_dist + 1);

  auto holds = [&](long v, std::uint64_t& checks, std::uint64_t& violations) {
    checks = 0;
    violations = 0;
    for (std::size_t g = 0; g < count; ++g) {
      const std::size_t s = starts[g], e = starts[g + 1];
      long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
      long t0 = -1, t1 = -1;
      for (std::size_t t = s; t < e; ++t) {
        const std::uint32_t p = verts[t];
        lo = std::min(lo, b.lo[p]);
        hi = std::max(hi, b.hi[p]);
        if (b.dist[p] < v) {
          if (t0 < 0) t0 = static_cast<long>(t - s);
          t1 = static_cast<long>(t - s);
        }
      }
      if (t0 < 0) {
        if ((hi - lo) * axis.step > v) return false;
        continue;
      }
      ++checks;
      auto span_diam = [&](std::size_t from, std::size_t to) {
        long l = std::numeric_limits<long>::max(), h = std::numeric_limits<long>::min();
        for (std::size_t t = from; t <= to; ++t) {
          l = std::min(l, b.lo[verts[t]]);
          h = std::max(h, b.hi[verts[t]]);
        }
        return (h - l) * axis.step;
      };
      bool ok = span_diam(s, s + static_cast<std::size_t>(t0)) <= v &&
                span_diam(s + static_cast<std::size_t>(t1), e - 1) <= v;
      for (long t = t0; t <= t1 && ok; ++t) ok = b.dist[verts[s + static_cast<std::size_t>(t)]] <= 3 * v;
      const std::uint32_t a = verts[s], z = verts[e - 1];
      const long ends = (std::max(b.hi[a], b.hi[z]) - std::min(b.lo[a], b.lo[z])) * axis.step;
      if (ok && ends > v) {
        const Element& at0 = b.ball[verts[s + static_cast<std::size_t>(t0)]];
        const Element& at1 = b.ball[verts[s + static_cast<std::size_t>(t1)]];
        for (long k = b.lo[a]; k <= b.hi[a] && ok; ++k)
          ok = group.distance(orbit_point(group, axis, k), at0) <= 2 * v;
        for (long k = b.lo[z]; k <= b.hi[z] && ok; ++k)
          ok = group.distance(orbit_point(group, axis, k), at1) <= 2 * v;
      }
      if (!ok) ++violations;
    }
    return violations == 0;
  };

  for (long v = std::max<long>(C, 0); v <= cap; ++v) {
    std::uint64_t checks = 0, violations = 0;
    if (holds(v, checks, violations)) {
      out.C_prime = v;
      out.found = true;
      out.corollary_checks = checks;
      out.corollary_violations = 0;
      return out;
    }
  }
  out.C_prime = cap;
  return out;
}

Element elementary_closure_root(const Group& group, const Element& c) {
  if (!group.is_free()) throw UsageError("elementary closures are computed for free groups only");
  if (c.norm == 0) throw UsageError("the identity has no elementary closure");
  CyclicReduction cr = cyclically_reduce(c.first);
  return group.make(primitive_root(cr.core));
}

}  // namespace cogrowth
