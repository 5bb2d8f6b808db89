#include "cogrowth/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <random>
#include <type_traits>
#include <unordered_map>

#include "cogrowth/errors.hpp"
#include "cogrowth/spec_io.hpp"

namespace cogrowth {

namespace {

constexpr std::size_t kMaxWitnesses = 16;

std::uint64_t hash_letters(std::span<const Letter> w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Letter x : w) {
    h ^= x;
    h *= 0x100000001b3ULL;
  }
  return h ^ (static_cast<std::uint64_t>(w.size()) * 0x9e3779b97f4a7c15ULL);
}

bool same_word(std::span<const Letter> a, std::span<const Letter> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Element order on words: norm first, then lexicographic.
bool word_less(std::span<const Letter> a, std::span<const Letter> b) { return shortlex_less(a, b); }

std::string fmt(std::span<const Letter> w) { return format_word(w); }

// diam of pi_E(o) u pi_E(x) for the axis through the identity.
long origin_span(std::span<const Letter> root, std::span<const Letter> x) {
  ExponentSpan s = project_free({}, root, x);
  return (std::max(s.hi, 0L) - std::min(s.lo, 0L)) * static_cast<long>(root.size());
}

// d^pi_Y(A, B) for Y given by its canonical rep, A and B either points or axes.
struct Span {
  long lo = 0, hi = 0;
  bool infinite = false;
};

Span point_span(const Axis& y, std::span<const Letter> x) {
  ExponentSpan s = project_free(y.coset_rep.first, y.root.first, x);
  return {s.lo, s.hi, false};
}

Span axis_span(const Axis& y, const Axis& other) {
  AxisSpan s = project_axis_free(y.coset_rep.first, other.coset_rep.first, y.root.first);
  return {s.lo, s.hi, s.self};
}

long span_distance(const Axis& y, const Span& a, const Span& b) {
  if (a.infinite || b.infinite) return kUnboundedProjection;
  return (std::max(a.hi, b.hi) - std::min(a.lo, b.lo)) * y.step;
}

long distance_words(std::span<const Letter> x, std::span<const Letter> y) {
  const std::size_t k = common_prefix(x, y);
  return static_cast<long>(x.size() + y.size() - 2 * k);
}

void require_free(const Group& group) {
  if (!group.is_free()) throw UsageError("the construction is implemented for free groups only");
}

ChecklistItem item(std::string name, long lhs, long rhs, bool strict) {
  ChecklistItem it{std::move(name), lhs, rhs, strict, false};
  it.pass = strict ? lhs > rhs : lhs >= rhs;
  return it;
}

}  // namespace

// ----- constants -------------------------------------------------------

bool PipelineConstants::checklist_pass() const {
  return std::all_of(checklist.begin(), checklist.end(), [](const ChecklistItem& i) { return i.pass; });
}

bool PipelineConstants::stages_allowed() const {
  return std::all_of(checklist.begin(), checklist.end(),
                     [](const ChecklistItem& i) { return i.pass || i.name == "D >= 7K + 2C'"; });
}

PipelineConstants choose_constants(long C, long C_prime, long theta, long c_norm, long f0_norm, int measurement_radius,
                                   const ConstantOverrides& overrides) {
  if (c_norm <= 0) throw UsageError("c must be nontrivial");
  PipelineConstants k;
  k.C = {C, Provenance::measured};
  k.C_prime = {C_prime, Provenance::measured};
  k.theta = {theta, Provenance::measured};
  k.theta_prime = {11 * theta, Provenance::derived};
  k.measurement_radius = measurement_radius;
  k.f0_norm = f0_norm;
  k.c_norm = c_norm;

  // Smallest integer strictly above max(C, theta + theta'/2), in halves.
  const long twice = std::max(2 * C, 2 * theta + k.theta_prime.value);
  const long K_auto = twice / 2 + 1;
  k.K = overrides.K ? LedgerValue{*overrides.K, Provenance::asserted} : LedgerValue{K_auto, Provenance::derived};
  const long K = k.K.value;
  k.D = overrides.D ? LedgerValue{*overrides.D, Provenance::asserted}
                    : LedgerValue{7 * K + 2 * C_prime, Provenance::derived};
  const long D = k.D.value;
  const long need = std::max({10 * K, 8 * C_prime + 8 * K, 6 * K + 1, 2 * D + 3 * K + 2 * C_prime});
  k.p = overrides.p ? LedgerValue{*overrides.p, Provenance::asserted}
                    : LedgerValue{need / c_norm + 1, Provenance::derived};
  k.c_p_norm = k.p.value * c_norm;
  k.E = 4 * f0_norm + 4 * C_prime + 10 * K + 1;
  k.Delta_prime = 2 * (k.Delta + k.E);

  const long cp = k.c_p_norm;
  k.checklist = {
      item("p >= 1", k.p.value, 1, false),
      item("C' >= C", C_prime, C, false),
      item("K > C", K, C, true),
      item("2K > 2theta + theta'", 2 * K, 2 * theta + k.theta_prime.value, true),
      item("D >= 7K + 2C'", D, 7 * K + 2 * C_prime, false),
      item("|c^p| > 10K", cp, 10 * K, true),
      item("|c^p| > 8C' + 8K", cp, 8 * C_prime + 8 * K, true),
      item("|c^p| > 6K + 1", cp, 6 * K + 1, true),
      item("|c^p| > 2D + 3K + 2C'", cp, 2 * D + 3 * K + 2 * C_prime, true),
  };
  return k;
}

// ----- f0 and G1 -------------------------------------------------------

F0Result find_f0(const Group& group, const Axis& axis, int radius, long C) {
  require_free(group);
  group.check_radius(radius);
  const Word& root = axis.root.first;
  const long step = axis.step;
  auto finish = [&](Element f, std::string method) {
    F0Result r;
    ExponentSpan s = project_free({}, root, f.first);
    r.diam_at_base_axis = (s.hi - s.lo) * step;
    ExponentSpan t = project_free({}, root, inverse_word(f.first));
    r.diam_at_f0_axis = (t.hi - t.lo) * step;
    r.within_C = r.diam_at_f0_axis <= C && r.diam_at_base_axis <= C;
    r.f0 = std::move(f);
    r.method = std::move(method);
    return r;
  };
  auto contains_zero = [](const ExponentSpan& s) { return s.lo <= 0 && 0 <= s.hi; };

  std::optional<Element> first_outside;
  std::optional<Element> found;
  group.enumerate_ball(radius, [&](const Element& f) {
    if (found || f.norm == 0) return;
    if (canonical_coset_rep(f.first, root).empty()) return;
    if (!first_outside) first_outside = f;
    if (contains_zero(project_free({}, root, f.first)) && contains_zero(project_free({}, root, inverse_word(f.first))))
      found = f;
  });
  if (found) return finish(*found, "search");
  if (!first_outside) throw ResourceError("no element outside the stabiliser of the axis within the f0 radius");

  // Closest pair between E and gE: f0 = c0^-i g c0^j of least norm.
  const Word& g = first_outside->first;
  const long window = static_cast<long>(g.size()) / step + 2;
  Word best;
  bool have = false;
  for (long i = -window; i <= window; ++i)
    for (long j = -window; j <= window; ++j) {
      Word w = multiply_words(power_word(root, -i), multiply_words(g, power_word(root, j)));
      if (!have || shortlex_less(w, best)) {
        best = std::move(w);
        have = true;
      }
    }
  return finish(group.make(best), "closest-pair");
}

bool in_G1(const Axis& axis, std::span<const Letter> g, long K) {
  const Word& root = axis.root.first;
  if (canonical_coset_rep(g, root).empty()) return false;
  if (origin_span(root, g) > 2 * K) return false;
  return origin_span(root, inverse_word(g)) <= 2 * K;
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::G1: return "G1";
    case Stage::G2: return "G2";
    case Stage::G3: return "G3";
    case Stage::G4: return "G4";
  }
  return "unknown";
}

void CheckOutcome::fail(Witness w) {
  ++failed;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
}

G1Result build_G1(const Group& group, const Axis& axis, const Element& f0, long K, int r_max) {
  require_free(group);
  group.check_radius(r_max);
  const int rank = group.spec().ranks.front();
  G1Result out;
  out.set.stage = Stage::G1;
  out.radius = r_max;

  const std::uint64_t ball = free_ball_size(rank, r_max);
  std::vector<std::int32_t> g1_of_ball(ball, -1);
  std::uint64_t index = 0;
  for (int n = 0; n <= r_max; ++n)
    for_each_reduced_word(rank, n, [&](const Word& w) {
      if (in_G1(axis, w, K)) {
        g1_of_ball[index] = static_cast<std::int32_t>(out.set.elements.size());
        out.set.elements.push_back(w);
      }
      ++index;
    });

  for (std::size_t i = 0; i < out.set.size(); ++i) {
    ++out.inverse_closed.checked;
    Word inv = inverse_word(out.set.elements[i]);
    if (g1_of_ball[free_word_index(inv, rank)] < 0)
      out.inverse_closed.fail({"G1-inverse-closed", {fmt(out.set.elements[i])}, {}});
  }

  // phi0 on the ball of radius r_max - 2|f0|.
  const Word& f = f0.first;
  const long fn = static_cast<long>(f.size());
  out.phi0_domain_radius = std::max(0, r_max - 2 * static_cast<int>(fn));
  std::vector<std::uint32_t> fiber(out.set.size(), 0);
  for (int n = 0; n <= out.phi0_domain_radius; ++n)
    for_each_reduced_word(rank, n, [&](const Word& w) {
      ++out.phi0_domain;
      const std::int32_t self = g1_of_ball[free_word_index(w, rank)];
      std::int32_t image = -1;
      if (self >= 0) {
        image = self;
        ++out.phi0_fixed;
      } else {
        ++out.lemma.checked;
        const Word cands[] = {multiply_words(f, w), multiply_words(w, f), multiply_words(f, multiply_words(w, f))};
        const Word* best = nullptr;
        for (const Word& c : cands) {
          const std::int32_t j = g1_of_ball[free_word_index(c, rank)];
          if (j >= 0 && (best == nullptr || shortlex_less(c, *best))) {
            best = &c;
            image = j;
          }
        }
        if (image < 0) out.lemma.fail({"phi0-candidate", {fmt(w), fmt(f)}, {}});
      }
      if (image < 0) return;
      ++fiber[static_cast<std::size_t>(image)];
      const long disp = std::labs(static_cast<long>(out.set.elements.length(static_cast<std::size_t>(image))) -
                                  static_cast<long>(w.size()));
      out.phi0_max_displacement = std::max(out.phi0_max_displacement, disp);
      ++out.displacement.checked;
      if (disp > 2 * fn)
        out.displacement.fail(
            {"phi0-displacement", {fmt(w), fmt(out.set.elements[static_cast<std::size_t>(image)])}, {disp, 2 * fn}});
    });
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    out.phi0_max_fiber = std::max<std::uint64_t>(out.phi0_max_fiber, fiber[i]);
    ++out.fiber.checked;
    if (fiber[i] > 4) out.fiber.fail({"phi0-fiber", {fmt(out.set.elements[i])}, {static_cast<long>(fiber[i])}});
  }
  return out;
}

// ----- G2 --------------------------------------------------------------

G2Result build_G2(const Group& group, const Axis& axis, std::span<const Letter> c, const G1Result& g1,
                  const PipelineConstants& constants, int order_radius) {
  require_free(group);
  G2Result out;
  out.set.stage = Stage::G2;
  const Word cp = power_word(c, constants.p.value);
  const long cpn = static_cast<long>(cp.size());
  const long K = constants.K.value, Cp = constants.C_prime.value;
  const CandidateSet& s1 = g1.set;

  WordArena raw;
  std::vector<std::uint32_t> raw_source;
  std::vector<std::uint64_t> raw_fiber;
  std::unordered_multimap<std::uint64_t, std::uint32_t> seen;
  seen.reserve(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    std::span<const Letter> g = s1.elements[i];
    Word x = multiply_words(inverse_word(g), multiply_words(cp, g));
    const long gn = static_cast<long>(g.size()), xn = static_cast<long>(x.size());
    ++out.sandwich.checked;
    const long lower = 2 * gn + cpn - 8 * Cp - 8 * K, upper = 2 * gn + cpn;
    if (xn < lower || xn > upper) out.sandwich.fail({"norm-sandwich", {fmt(g), fmt(x)}, {lower, xn, upper}});

    const std::uint64_t h = hash_letters(x);
    std::int64_t hit = -1;
    for (auto [it, end] = seen.equal_range(h); it != end; ++it)
      if (same_word(raw[it->second], x)) hit = it->second;
    if (hit < 0) {
      seen.emplace(h, static_cast<std::uint32_t>(raw.size()));
      raw.push_back(x);
      raw_source.push_back(static_cast<std::uint32_t>(i));
      raw_fiber.push_back(1);
      continue;
    }
    // Same conjugate: g h^-1 commutes with c^p, and |g h^-1| <= 4K.
    const std::size_t j = static_cast<std::size_t>(hit);
    ++raw_fiber[j];
    std::span<const Letter> first = s1.elements[raw_source[j]];
    const Word gh = multiply_words(g, inverse_word(first));
    const long spread = static_cast<long>(gh.size());
    out.max_fiber_spread = std::max(out.max_fiber_spread, spread);
    ++out.fiber.checked;
    if (spread > 4 * K) out.fiber.fail({"phi1-fiber", {fmt(g), fmt(first)}, {spread, 4 * K}});
  }
  const double ball_4K = 2.0 * std::pow(3.0, static_cast<double>(4 * K));
  for (std::uint64_t f : raw_fiber) {
    out.max_fiber = std::max(out.max_fiber, f);
    if (static_cast<double>(f) > ball_4K) out.fiber.fail({"phi1-fiber-count", {}, {static_cast<long>(f)}});
  }

  std::vector<std::uint32_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return word_less(raw[a], raw[b]); });
  std::size_t letters = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) letters += raw.length(i);
  out.set.elements.reserve(raw.size(), letters);
  out.set.source.reserve(raw.size());
  for (std::uint32_t i : order) {
    out.set.elements.push_back(raw[i]);
    out.set.source.push_back(raw_source[i]);
  }

  // E before g^-1 E before g^-1 c^p g E for short g in G1.
  const Axis base = make_axis(group, axis.root, group.identity());
  for (std::size_t i = 0; i < s1.size() && static_cast<int>(s1.elements.length(i)) <= order_radius; ++i) {
    std::span<const Letter> g = s1.elements[i];
    Word x = multiply_words(inverse_word(g), multiply_words(cp, g));
    const Axis z = make_axis(group, axis.root, group.make(x));
    const Axis mid = make_axis(group, axis.root, group.make(inverse_word(g)));
    const Axis fam[] = {mid};
    OrderCheck oc = order_interval(group, base, z, fam, constants.theta.value);
    ++out.order.checked;
    if (!oc.consistent() || oc.order.size() != 3 || !(oc.order[1] == mid))
      out.order.fail({"G2-order", {fmt(g)}, {static_cast<long>(oc.order.size())}});
  }
  return out;
}

// ----- G3 --------------------------------------------------------------

G3Result build_G3(const Axis& axis, const CandidateSet& g2, long K, std::uint64_t seed) {
  G3Result out;
  out.set.stage = Stage::G3;
  if (g2.size() == 0) return out;
  const Word& root = axis.root.first;
  const long sep = 6 * K + 1;
  std::size_t n_min = g2.elements.length(0);
  for (std::size_t i = 1; i < g2.size(); ++i) n_min = std::min(n_min, g2.elements.length(i));
  // Points within 6K share a prefix of this length.
  const std::size_t L = static_cast<std::size_t>(std::max(0L, static_cast<long>(n_min) - 3 * K));
  auto bucket_of = [&](std::span<const Letter> w) { return hash_letters(w.first(std::min(L, w.size()))); };

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  std::vector<std::uint32_t> accepted;
  for (std::size_t i = 0; i < g2.size(); ++i) {
    std::span<const Letter> x = g2.elements[i];
    auto& b = buckets[bucket_of(x)];
    bool near = false;
    for (std::uint32_t a : b)
      if (distance_words(x, g2.elements[accepted[a]]) < sep) {
        near = true;
        break;
      }
    if (near) continue;
    b.push_back(static_cast<std::uint32_t>(accepted.size()));
    accepted.push_back(static_cast<std::uint32_t>(i));
  }

  for (std::uint32_t i : accepted) {
    out.set.elements.push_back(g2.elements[i]);
    out.set.source.push_back(i);
  }

  // phi2: nearest accepted element, ties to the smaller index.
  std::vector<std::uint64_t> fiber(accepted.size(), 0);
  for (std::size_t i = 0; i < g2.size(); ++i) {
    std::span<const Letter> x = g2.elements[i];
    long best = -1;
    std::uint32_t arg = 0;
    for (std::uint32_t a : buckets[bucket_of(x)]) {
      const long d = distance_words(x, out.set.elements[a]);
      if (best < 0 || d < best || (d == best && a < arg)) {
        best = d;
        arg = a;
      }
    }
    ++out.displacement.checked;
    if (best < 0 || best >= sep) {
      out.displacement.fail({"phi2-displacement", {fmt(x)}, {best, sep}});
      continue;
    }
    ++fiber[arg];
    out.max_displacement = std::max(out.max_displacement, best);
  }
  for (std::uint64_t f : fiber) out.max_fiber = std::max(out.max_fiber, f);

  // Separation: complete inside buckets, plus random pairs.
  for (const auto& [key, members] : buckets) {
    (void)key;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        ++out.bucket_pairs;
        ++out.separation.checked;
        const long d = distance_words(out.set.elements[members[a]], out.set.elements[members[b]]);
        if (d < sep)
          out.separation.fail(
              {"separation", {fmt(out.set.elements[members[a]]), fmt(out.set.elements[members[b]])}, {d, sep}});
      }
  }
  if (out.set.size() > 1) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, out.set.size() - 1);
    for (int t = 0; t < 10'000; ++t) {
      const std::size_t a = pick(rng), b = pick(rng);
      if (a == b) continue;
      ++out.separation.checked;
      const long d = distance_words(out.set.elements[a], out.set.elements[b]);
      if (d < sep) out.separation.fail({"separation", {fmt(out.set.elements[a]), fmt(out.set.elements[b])}, {d, sep}});
    }
  }

  // Distinct accepted elements have distinct axes; endpoint projections below 3K.
  std::unordered_multimap<std::uint64_t, std::uint32_t> axes;
  axes.reserve(out.set.size());
  for (std::size_t i = 0; i < out.set.size(); ++i) {
    std::span<const Letter> x = out.set.elements[i];
    const Word rep = canonical_coset_rep(x, root);
    const std::uint64_t h = hash_letters(rep);
    ++out.same_axis.checked;
    for (auto [it, end] = axes.equal_range(h); it != end; ++it)
      if (same_word(canonical_coset_rep(out.set.elements[it->second], root), rep))
        out.same_axis.fail({"same-axis", {fmt(out.set.elements[it->second]), fmt(x)}, {}});
    axes.emplace(h, static_cast<std::uint32_t>(i));

    ++out.endpoint.checked;
    const long d = origin_span(root, inverse_word(x));
    if (d >= 3 * K) out.endpoint.fail({"endpoint-projection", {fmt(x)}, {d, 3 * K}});
  }
  return out;
}

// ----- G4 --------------------------------------------------------------

G4Result build_G4(std::span<const Letter> c, const CandidateSet& g3, const PipelineConstants& constants) {
  G4Result out;
  out.set.stage = Stage::G4;
  const long D = constants.D.value;
  const Word c2p = power_word(c, 2 * constants.p.value);
  std::size_t max_x = 0;
  for (std::size_t i = 0; i < g3.size(); ++i) max_x = std::max(max_x, g3.elements.length(i));

  // Markers y = x c^2p; a marker within D of [o, x.o] has lcp(x, y) >= |y| - D.
  constexpr std::uint64_t kBase = 0x100000001b3ULL;
  auto key = [](std::size_t len, std::uint64_t h) { return h ^ (static_cast<std::uint64_t>(len) * 0x9e3779b97f4a7c15ULL); };
  WordArena markers;
  std::vector<std::uint32_t> marker_owner;
  std::unordered_multimap<std::uint64_t, std::uint32_t> prefixes;
  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < g3.size(); ++i) {
    Word y = multiply_words(g3.elements[i], c2p);
    if (static_cast<long>(y.size()) > static_cast<long>(max_x) + D) continue;
    const std::uint32_t m = static_cast<std::uint32_t>(markers.size());
    const std::size_t lo = static_cast<std::size_t>(std::max(0L, static_cast<long>(y.size()) - D));
    const std::size_t hi = std::min(y.size(), max_x);
    std::uint64_t h = 0;
    for (std::size_t L = 0; L <= hi; ++L) {
      if (L >= lo) {
        prefixes.emplace(key(L, h), m);
        lengths.push_back(L);
      }
      if (L < y.size()) h = h * kBase + y[L] + 1;
    }
    markers.push_back(y);
    marker_owner.push_back(static_cast<std::uint32_t>(i));
  }
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

  std::vector<bool> removed(g3.size(), false);
  if (!markers.empty()) {
    for (std::size_t i = 0; i < g3.size(); ++i) {
      std::span<const Letter> x = g3.elements[i];
      std::uint64_t h = 0;
      std::size_t L = 0;
      for (std::size_t want : lengths) {
        if (want > x.size() || removed[i]) break;
        for (; L < want; ++L) h = h * kBase + x[L] + 1;
        for (auto [it, end] = prefixes.equal_range(key(want, h)); it != end; ++it) {
          const std::uint32_t m = it->second;
          if (marker_owner[m] == i) continue;
          std::span<const Letter> y = markers[m];
          const long dist = static_cast<long>(y.size()) - static_cast<long>(std::min(common_prefix(x, y), x.size()));
          if (dist > D) continue;
          removed[i] = true;
          if (out.shadow_witnesses.size() < kMaxWitnesses)
            out.shadow_witnesses.push_back({"shadow", {fmt(x), fmt(g3.elements[marker_owner[m]])}, {dist, D}});
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < g3.size(); ++i) {
    if (removed[i]) {
      ++out.removed;
      continue;
    }
    out.set.elements.push_back(g3.elements[i]);
    out.set.source.push_back(static_cast<std::uint32_t>(i));
  }

  // Survival per shell of width Delta' and per unit shell.
  auto shells = [&](long width) {
    std::vector<SurvivalShell> v;
    for (std::size_t i = 0; i < g3.size(); ++i) {
      const long lo = static_cast<long>(g3.elements.length(i)) / width * width;
      if (v.empty() || v.back().lo != lo) v.push_back({lo, 0, 0, false});
      ++v.back().g3;
      if (!removed[i]) ++v.back().g4;
    }
    return v;
  };
  const long width = std::max(1L, constants.Delta_prime);
  out.shells = shells(width);
  out.unit_shells = shells(1);
  const long threshold = 7 * constants.c_p_norm;
  for (auto& s : out.shells) {
    s.admissible = s.lo > threshold;
    if (s.admissible) out.admissible_reachable = true;
  }
  if (out.admissible_reachable) {
    out.survival_rule = "survival >= 1/2 on shells of width Delta' above 7|c^p|";
    out.survival_pass = std::all_of(out.shells.begin(), out.shells.end(),
                                    [](const SurvivalShell& s) { return !s.admissible || 2 * s.g4 >= s.g3; });
  } else {
    out.survival_rule = "no shell above 7|c^p| is reachable; survival > 0 on the top three non-empty unit shells";
    const std::size_t n = out.unit_shells.size();
    out.survival_pass = n > 0;
    for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i)
      if (out.unit_shells[i].g4 == 0) out.survival_pass = false;
  }
  return out;
}

// ----- injection -------------------------------------------------------

std::vector<long> preimage_norms(const CandidateSet& g1, const CandidateSet& g2, const CandidateSet& g3,
                                 const CandidateSet& g4) {
  std::vector<long> out(g4.size());
  for (std::size_t i = 0; i < g4.size(); ++i) {
    const std::uint32_t i2 = g3.source[g4.source[i]];
    out[i] = static_cast<long>(g1.elements.length(g2.source[i2]));
  }
  return out;
}

InjectionResult tree_injection_scan(std::span<const Letter> c, const CandidateSet& g4,
                                    std::span<const long> preimage_norm, long p, int k_max, long norm_budget) {
  InjectionResult out;
  out.k_max = k_max;
  out.norm_budget = norm_budget;
  out.tuples_by_length.assign(static_cast<std::size_t>(std::max(k_max, 0)) + 1, 0);
  const Word c2p = power_word(c, 2 * p);

  std::vector<std::uint32_t> gens;
  for (std::size_t i = 0; i < g4.size(); ++i)
    if (preimage_norm[i] <= norm_budget) gens.push_back(static_cast<std::uint32_t>(i));
  std::stable_sort(gens.begin(), gens.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return preimage_norm[a] < preimage_norm[b]; });
  out.generators = gens.size();

  const std::size_t stride = static_cast<std::size_t>(std::max(k_max, 1));
  std::vector<std::uint32_t> stored;  // tuples, `stride` entries each, padded with ~0
  std::unordered_map<std::uint64_t, std::uint64_t> images;
  auto image_of = [&](std::uint64_t id) {
    Word w;
    for (std::size_t j = 0; j < stride; ++j) {
      const std::uint32_t g = stored[id * stride + j];
      if (g == ~0u) break;
      append_reduced(w, g4.elements[g]);
      append_reduced(w, c2p);
    }
    return w;
  };
  auto describe = [&](const std::vector<std::uint32_t>& t) {
    std::vector<std::string> v;
    for (std::uint32_t g : t) v.push_back(fmt(g4.elements[g]));
    return v;
  };

  std::vector<std::uint32_t> tuple;
  std::vector<Word> prefix{Word{}};
  auto visit = [&](auto&& self, long budget) -> void {
    for (std::uint32_t g : gens) {
      if (preimage_norm[g] > budget) break;
      Word w = prefix.back();
      append_reduced(w, g4.elements[g]);
      append_reduced(w, c2p);
      tuple.push_back(g);
      ++out.tuples;
      ++out.tuples_by_length[tuple.size()];
      ++out.collisions.checked;
      const std::uint64_t id = stored.size() / stride;
      for (std::size_t j = 0; j < stride; ++j) stored.push_back(j < tuple.size() ? tuple[j] : ~0u);
      auto [it, fresh] = images.emplace(hash_letters(w), id);
      if (!fresh && same_word(image_of(it->second), w)) {
        std::vector<std::uint32_t> other;
        for (std::size_t j = 0; j < stride && stored[it->second * stride + j] != ~0u; ++j)
          other.push_back(stored[it->second * stride + j]);
        std::vector<std::string> words = describe(other);
        words.push_back("|");
        for (auto& s : describe(tuple)) words.push_back(s);
        out.collisions.fail({"injection", words, {static_cast<long>(other.size()), static_cast<long>(tuple.size())}});
      }
      if (static_cast<int>(tuple.size()) < k_max) {
        prefix.push_back(std::move(w));
        self(self, budget - preimage_norm[g]);
        prefix.pop_back();
      }
      tuple.pop_back();
    }
  };
  if (k_max >= 1) visit(visit, norm_budget);
  return out;
}

// ----- zig-zag ---------------------------------------------------------

ZigzagResult check_zigzag(const Group& group, const Axis& axis, std::span<const Letter> c, const CandidateSet& g1,
                          const CandidateSet& g2, const CandidateSet& g3, const CandidateSet& g4,
                          const PipelineConstants& constants, std::uint64_t samples, int k_max, std::uint64_t seed) {
  ZigzagResult out;
  out.k_max = k_max;
  if (g4.size() == 0 || k_max < 1) return out;
  const long K = constants.K.value;
  const Word cp = power_word(c, constants.p.value);
  const Word c2p = power_word(c, 2 * constants.p.value);
  const Word c2p_inv = inverse_word(c2p);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, k_max);
  std::uniform_int_distribution<std::size_t> pick(0, g4.size() - 1);

  for (std::uint64_t s = 0; s < samples; ++s) {
    const int k = len(rng);
    std::vector<Axis> Z;
    std::vector<Word> z, zp;
    Word P;  // P_0 = identity
    Z.push_back(make_axis(group, axis.root, group.identity()));
    z.push_back(c2p_inv);
    zp.push_back(Word{});
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) {
      const std::size_t gi = pick(rng);
      std::span<const Letter> g = g4.elements[gi];
      std::span<const Letter> e = g1.elements[g2.source[g3.source[g4.source[gi]]]];
      names.push_back(fmt(g));
      const Word Pe = multiply_words(P, inverse_word(e));
      Z.push_back(make_axis(group, axis.root, group.make(Pe)));
      z.push_back(Pe);
      zp.push_back(multiply_words(Pe, cp));
      P = multiply_words(multiply_words(P, g), c2p);
      Z.push_back(make_axis(group, axis.root, group.make(P)));
      z.push_back(multiply_words(P, c2p_inv));
      zp.push_back(P);
    }
    ++out.tuples;
    const std::size_t n = Z.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const long a = span_distance(Z[i], point_span(Z[i], zp[i]), axis_span(Z[i], Z[j]));
        const long b = span_distance(Z[j], point_span(Z[j], z[j]), axis_span(Z[j], Z[i]));
        const bool consecutive = j == i + 1;
        CheckOutcome& chk = consecutive ? out.base : out.inductive;
        const long bound = consecutive ? 3 * K : 5 * K;
        ++chk.checked;
        if (a >= bound || b >= bound) {
          std::vector<std::string> words = names;
          chk.fail({chk.name, words, {static_cast<long>(i), static_cast<long>(j), a, b, bound}});
        }
      }
  }
  return out;
}

// ----- certificate and ratios ------------------------------------------

std::string to_string(CertificateVerdict v) {
  return v == CertificateVerdict::certified ? "certified" : "inconclusive";
}

EpsilonCertificate cogrowth_lower_bound(const ShellCensus& census, double delta, long c2p_norm) {
  EpsilonCertificate out;
  out.delta = delta;
  out.grid_step = kEpsilonStep;
  auto log_sum = [&](double s) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < census.size(); ++i)
      if (census.counts[i] > 0)
        m = std::max(m, std::log(census.counts[i]) - s * static_cast<double>(census.delta) * static_cast<double>(i));
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (std::size_t i = 0; i < census.size(); ++i)
      if (census.counts[i] > 0)
        acc += std::exp(std::log(census.counts[i]) - s * static_cast<double>(census.delta) * static_cast<double>(i) - m);
    return m + std::log(acc);
  };
  const long steps = std::lround(kEpsilonMax / kEpsilonStep);
  for (long k = steps; k >= 1; --k) {
    const double eps = static_cast<double>(k) * kEpsilonStep;
    const double s = delta + eps;
    const double lhs = log_sum(s), rhs = s * static_cast<double>(c2p_norm);
    if (k == 1 || lhs >= rhs) {
      out.epsilon = lhs >= rhs ? eps : 0.0;
      out.log_partial_sum = std::isfinite(lhs) ? lhs : -1e300;
      out.log_threshold = rhs;
      out.verdict = lhs >= rhs ? CertificateVerdict::certified : CertificateVerdict::inconclusive;
      if (lhs >= rhs) break;
    }
  }
  return out;
}

CogrowthRatio cogrowth_ratio(const Group& group, const NormalSubgroupOracle& oracle, int r_max) {
  CogrowthRatio out;
  out.group = shell_census(group, r_max, 1);
  out.subgroup = shell_census(group, r_max, 1, &oracle);
  std::size_t nonzero = 0;
  for (double v : out.subgroup.counts)
    if (v > 0) ++nonzero;
  if (nonzero < 4) throw DiagnosticError("fewer than four non-empty subgroup shells");
  out.group_rate = growth_rate(out.group);
  out.subgroup_rate = growth_rate(out.subgroup);
  out.ratio = out.subgroup_rate.regression.delta / out.group_rate.regression.delta;
  return out;
}

ShellCensus stage_census(const CandidateSet& set, long max_norm) {
  std::vector<std::uint64_t> per_norm(static_cast<std::size_t>(std::max(0L, max_norm)) + 1, 0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const long n = static_cast<long>(set.elements.length(i));
    if (n <= max_norm) ++per_norm[static_cast<std::size_t>(n)];
  }
  return census_from_norm_counts(per_norm, 1);
}

// ----- config and run --------------------------------------------------

PipelineConfig parse_pipeline_config(std::string_view text, const std::string& base_dir) {
  KeyValues kv = KeyValues::parse(text);
  kv.require_known({"group", "c", "p", "D", "K", "r_max", "k_max", "norm_budget", "measurement_radius", "order_radius",
                    "f0_radius", "zigzag_samples", "zigzag_k_max", "seed"});
  PipelineConfig cfg;
  if (!kv.has("group")) throw ParseError("pipeline config needs group=");
  if (!kv.has("c")) throw ParseError("pipeline config needs c=");
  std::filesystem::path path(kv.get("group"));
  if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
  cfg.group_path = path.lexically_normal().string();
  cfg.group = parse_group_spec(read_file(cfg.group_path));
  cfg.c = kv.get("c");
  auto optional_long = [&](std::string_view key) -> std::optional<long> {
    if (!kv.has(key) || kv.get(key) == "auto") return std::nullopt;
    return parse_int(kv.get(key), key);
  };
  cfg.overrides.K = optional_long("K");
  cfg.overrides.D = optional_long("D");
  cfg.overrides.p = optional_long("p");
  auto nonneg = [&](std::string_view key, auto& field) {
    if (!kv.has(key)) return;
    const int v = parse_int(kv.get(key), key);
    if (v < 0) throw ParseError(std::string(key) + " must be nonnegative");
    field = static_cast<std::remove_reference_t<decltype(field)>>(v);
  };
  nonneg("r_max", cfg.r_max);
  nonneg("k_max", cfg.k_max);
  nonneg("norm_budget", cfg.norm_budget);
  nonneg("measurement_radius", cfg.measurement_radius);
  nonneg("order_radius", cfg.order_radius);
  nonneg("f0_radius", cfg.f0_radius);
  nonneg("zigzag_samples", cfg.zigzag_samples);
  nonneg("zigzag_k_max", cfg.zigzag_k_max);
  nonneg("seed", cfg.seed);
  return cfg;
}

std::vector<const CheckOutcome*> PipelineRun::hard_checks() const {
  if (!stages_run) return {};
  return {&g1.lemma,        &g1.displacement, &g1.fiber,    &g1.inverse_closed, &g2.sandwich,     &g2.fiber,
          &g2.order,        &g3.separation,   &g3.same_axis, &g3.endpoint,      &g3.displacement, &injection.collisions,
          &zigzag.base,     &zigzag.inductive};
}

bool PipelineRun::hard_pass() const {
  auto checks = hard_checks();
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome* c) { return c->pass(); });
}

int PipelineRun::exit_code() const {
  if (!constants.checklist_pass()) return 5;
  return hard_pass() ? 0 : 4;
}

PipelineRun run_pipeline(const PipelineConfig& config) {
  PipelineRun run;
  run.config = config;
  Group group(config.group);
  require_free(group);
  group.check_radius(config.r_max);
  group.check_radius(config.measurement_radius);

  const Element c_in = group.parse(config.c);
  if (c_in.norm == 0) throw UsageError("c must be nontrivial");
  // The axis passes through o once c is replaced by its cyclic core.
  const CyclicReduction cr = cyclically_reduce(c_in.first);
  run.c = group.make(cr.core);
  run.root = elementary_closure_root(group, run.c);
  const Axis axis = make_axis(group, run.root, group.identity());

  run.contraction = measure_contraction(group, axis, config.measurement_radius);
  run.bgi = measure_bgi(group, axis, config.measurement_radius, run.contraction.C);
  AxisFamily family = axis_family(group, run.root, config.measurement_radius);
  ProjectionTable table(group, family);
  run.p0 = check_P0(family, table);
  run.f0 = find_f0(group, axis, config.f0_radius, run.contraction.C);

  run.constants = choose_constants(run.contraction.C, run.bgi.C_prime, run.p0.theta, run.c.norm, run.f0.f0.norm,
                                   config.measurement_radius, config.overrides);
  run.constants.checklist.push_back(item("contraction stable", run.contraction.contracting ? 1 : 0, 1, false));
  run.constants.checklist.push_back(item("C' found", run.bgi.found ? 1 : 0, 1, false));
  run.constants.checklist.push_back(item("f0 projections within C", run.f0.within_C ? 1 : 0, 1, false));
  if (!run.constants.stages_allowed()) return run;
  run.stages_run = true;

  const PipelineConstants& k = run.constants;
  run.g1 = build_G1(group, axis, run.f0.f0, k.K.value, config.r_max);
  run.g2 = build_G2(group, axis, run.c.first, run.g1, k, config.order_radius);
  run.g3 = build_G3(axis, run.g2.set, k.K.value, config.seed);
  run.g4 = build_G4(run.c.first, run.g3.set, k);

  // A G2 element of norm n comes from a shortest coset rep of norm at most
  // (n - |c^p| + 2(|c0| - 1)) / 2.
  run.census_max_norm = 2L * config.r_max + k.c_p_norm - 2 * (static_cast<long>(run.root.norm) - 1);
  std::vector<std::uint64_t> per_norm = norm_counts(group, config.r_max);
  run.group_census = census_from_norm_counts(per_norm, 1);
  run.g3_census = stage_census(run.g3.set, run.census_max_norm);
  run.g4_census = stage_census(run.g4.set, run.census_max_norm);
  auto rate = [](const ShellCensus& s) -> std::optional<GrowthReport> {
    try {
      return growth_rate(s);
    } catch (const DiagnosticError&) {
      return std::nullopt;
    } catch (const UsageError&) {
      return std::nullopt;
    }
  };
  run.group_rate = rate(run.group_census);
  run.g3_rate = rate(run.g3_census);
  run.g4_rate = rate(run.g4_census);

  const std::vector<long> norms = preimage_norms(run.g1.set, run.g2.set, run.g3.set, run.g4.set);
  run.injection = tree_injection_scan(run.c.first, run.g4.set, norms, k.p.value, config.k_max, config.norm_budget);
  run.zigzag = check_zigzag(group, axis, run.c.first, run.g1.set, run.g2.set, run.g3.set, run.g4.set, k,
                            config.zigzag_samples, config.zigzag_k_max, config.seed);
  const double delta = run.g4_rate ? run.g4_rate->regression.delta : 0.0;
  run.certificate = cogrowth_lower_bound(run.g4_census, delta, 2 * k.c_p_norm);
  return run;
}

}  // namespace cogrowth
