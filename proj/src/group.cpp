#include "cogrowth/group.hpp"

#include <algorithm>
#include <limits>

#include "cogrowth/errors.hpp"
#include "cogrowth/todd_coxeter.hpp"

namespace cogrowth {

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::free: return "free";
    case GroupKind::direct_product_of_free: return "direct_product_of_free";
    case GroupKind::finitely_presented: return "finitely_presented";
  }
  return "unknown";
}

std::uint64_t free_ball_size(int rank, int r) {
  if (r < 0) return 0;
  std::uint64_t total = 1;
  std::uint64_t sphere = static_cast<std::uint64_t>(2 * rank);
  for (int k = 1; k <= r; ++k) {
    total += sphere;
    sphere *= static_cast<std::uint64_t>(2 * rank - 1);
  }
  return total;
}

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

}  // namespace

std::uint64_t free_word_index(const Word& w, int rank) {
  const int n = static_cast<int>(w.size());
  std::uint64_t index = n == 0 ? 0 : free_ball_size(rank, n - 1);
  const std::uint64_t branch = static_cast<std::uint64_t>(2 * rank - 1);
  for (int i = 0; i < n; ++i) {
    int x = w[static_cast<std::size_t>(i)];
    int smaller = x;
    if (i > 0 && (w[static_cast<std::size_t>(i - 1)] ^ 1) < x) --smaller;
    index += static_cast<std::uint64_t>(smaller) * ipow(branch, n - i - 1);
  }
  return index;
}

Word free_word_at(std::uint64_t index, int rank) {
  int n = 0;
  while (free_ball_size(rank, n) <= index) ++n;
  index -= n == 0 ? 0 : free_ball_size(rank, n - 1);
  const std::uint64_t branch = static_cast<std::uint64_t>(2 * rank - 1);
  Word w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::uint64_t block = ipow(branch, n - i - 1);
    int smaller = static_cast<int>(index / block);
    index %= block;
    int x = smaller;
    if (i > 0 && (w[static_cast<std::size_t>(i - 1)] ^ 1) <= x) ++x;
    w[static_cast<std::size_t>(i)] = static_cast<Letter>(x);
  }
  return w;
}

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  const std::size_t factors = spec_.kind == GroupKind::direct_product_of_free ? 2 : 1;
  if (spec_.ranks.size() != factors) throw UsageError("wrong number of ranks for group kind");
  for (int r : spec_.ranks)
    if (r < 1 || r > kMaxRank) throw UsageError("rank must be between 1 and 25");
  if (spec_.radius_bound < 0) throw UsageError("radius bound must be non-negative");
  if (spec_.kind != GroupKind::finitely_presented && !spec_.relators.empty())
    throw UsageError("relators are only allowed for finitely presented groups");

  const int r0 = spec_.ranks[0];
  if (spec_.kind == GroupKind::direct_product_of_free) {
    // (S u 1) x (S u 1) minus the identity, identity component ordered first:
    // a shortlex-first geodesic then moves a component only when it must.
    const int r1 = spec_.ranks[1];
    for (int x = -1; x < 2 * r0; ++x) {
      for (int y = -1; y < 2 * r1; ++y) {
        if (x < 0 && y < 0) continue;
        Element g;
        if (x >= 0) g.first.push_back(static_cast<Letter>(x));
        if (y >= 0) g.second.push_back(static_cast<Letter>(y));
        g.norm = 1;
        generators_.push_back(std::move(g));
      }
    }
  } else {
    if (spec_.kind == GroupKind::finitely_presented)
      table_ = std::make_shared<FiniteCayleyTable>(r0, spec_.relators, spec_.coset_limit);
    for (int x = 0; x < 2 * r0; ++x) {
      Element g = make(Word{static_cast<Letter>(x)});
      if (g.norm == 1) generators_.push_back(std::move(g));
    }
  }
}

int Group::abstract_rank() const {
  int n = 0;
  for (int r : spec_.ranks) n += r;
  return n;
}

int Group::compute_norm(const Element& e) const {
  return static_cast<int>(std::max(e.first.size(), e.second.size()));
}

Element Group::make(Word first, Word second) const {
  Element e;
  switch (spec_.kind) {
    case GroupKind::free:
      if (!second.empty()) throw UsageError("free group elements have one component");
      e.first = reduce_word(first);
      break;
    case GroupKind::direct_product_of_free:
      e.first = reduce_word(first);
      e.second = reduce_word(second);
      break;
    case GroupKind::finitely_presented: {
      if (!second.empty()) throw UsageError("finitely presented elements have one component");
      int id = table_->trace(0, first);
      e.first = table_->word(id);
      break;
    }
  }
  e.norm = compute_norm(e);
  return e;
}

Element Group::multiply(const Element& a, const Element& b) const {
  if (spec_.kind == GroupKind::finitely_presented) {
    int id = table_->trace(table_->id_of(a.first), b.first);
    Element e;
    e.first = table_->word(id);
    e.norm = compute_norm(e);
    return e;
  }
  Element e;
  e.first = multiply_words(a.first, b.first);
  e.second = multiply_words(a.second, b.second);
  e.norm = compute_norm(e);
  return e;
}

Element Group::inverse(const Element& a) const {
  if (spec_.kind == GroupKind::finitely_presented) return make(inverse_word(a.first));
  Element e;
  e.first = inverse_word(a.first);
  e.second = inverse_word(a.second);
  e.norm = a.norm;
  return e;
}

int Group::distance(const Element& a, const Element& b) const {
  return multiply(inverse(a), b).norm;
}

bool Group::element_less(const Element& a, const Element& b) const {
  if (a.norm != b.norm) return a.norm < b.norm;
  if (a.first != b.first) return shortlex_less(a.first, b.first);
  return shortlex_less(a.second, b.second);
}

void Group::check_radius(int r) const {
  if (r < 0) throw UsageError("radius must be non-negative");
  if (r > spec_.radius_bound)
    throw ResourceError("radius " + std::to_string(r) + " exceeds the declared radius bound " +
                        std::to_string(spec_.radius_bound));
}

void Group::enumerate_sphere(int r, const std::function<void(const Element&)>& visit) const {
  check_radius(r);
  switch (spec_.kind) {
    case GroupKind::free: {
      Element e;
      e.norm = r;
      for_each_reduced_word(spec_.ranks[0], r, [&](const Word& w) {
        e.first = w;
        visit(e);
      });
      break;
    }
    case GroupKind::direct_product_of_free: {
      // Sphere r: pairs (u, v) with max(|u|, |v|) = r, ordered by u then v.
      std::vector<Word> ball_v;
      std::vector<Word> sphere_v;
      for (int k = 0; k <= r; ++k)
        for_each_reduced_word(spec_.ranks[1], k, [&](const Word& w) {
          ball_v.push_back(w);
          if (k == r) sphere_v.push_back(w);
        });
      Element e;
      e.norm = r;
      for (int k = 0; k <= r; ++k) {
        for_each_reduced_word(spec_.ranks[0], k, [&](const Word& u) {
          e.first = u;
          for (const Word& v : k == r ? ball_v : sphere_v) {
            e.second = v;
            visit(e);
          }
        });
      }
      break;
    }
    case GroupKind::finitely_presented: {
      Element e;
      e.norm = r;
      for (std::size_t id = 0; id < table_->size(); ++id) {
        const Word& w = table_->word(static_cast<int>(id));
        if (static_cast<int>(w.size()) < r) continue;
        if (static_cast<int>(w.size()) > r) break;
        e.first = w;
        visit(e);
      }
      break;
    }
  }
}

void Group::enumerate_ball(int r, const std::function<void(const Element&)>& visit) const {
  check_radius(r);
  for (int k = 0; k <= r; ++k) enumerate_sphere(k, visit);
}

std::vector<Element> Group::ball(int r) const {
  std::vector<Element> out;
  if (spec_.kind != GroupKind::finitely_presented) out.reserve(ball_size(r));
  enumerate_ball(r, [&](const Element& e) { out.push_back(e); });
  return out;
}

std::uint64_t Group::ball_size(int r) const {
  switch (spec_.kind) {
    case GroupKind::free: return free_ball_size(spec_.ranks[0], r);
    case GroupKind::direct_product_of_free:
      return free_ball_size(spec_.ranks[0], r) * free_ball_size(spec_.ranks[1], r);
    case GroupKind::finitely_presented: {
      std::uint64_t n = 0;
      for (std::size_t id = 0; id < table_->size(); ++id)
        if (static_cast<int>(table_->word(static_cast<int>(id)).size()) <= r) ++n;
      return n;
    }
  }
  return 0;
}

std::uint64_t Group::ball_index(const Element& e, int r) const {
  if (e.norm > r) throw UsageError("element outside the ball");
  switch (spec_.kind) {
    case GroupKind::free: return free_word_index(e.first, spec_.ranks[0]);
    case GroupKind::direct_product_of_free:
      return free_word_index(e.first, spec_.ranks[0]) * free_ball_size(spec_.ranks[1], r) +
             free_word_index(e.second, spec_.ranks[1]);
    case GroupKind::finitely_presented:
      return static_cast<std::uint64_t>(table_->id_of(e.first));
  }
  return 0;
}

Element Group::ball_element(std::uint64_t index, int r) const {
  if (index >= ball_size(r)) throw UsageError("ball index out of range");
  switch (spec_.kind) {
    case GroupKind::free: return make(free_word_at(index, spec_.ranks[0]));
    case GroupKind::direct_product_of_free: {
      std::uint64_t n = free_ball_size(spec_.ranks[1], r);
      return make(free_word_at(index / n, spec_.ranks[0]), free_word_at(index % n, spec_.ranks[1]));
    }
    case GroupKind::finitely_presented: return make(table_->word(static_cast<int>(index)));
  }
  return identity();
}

std::vector<Element> Group::geodesic(const Element& a, const Element& b) const {
  Element d = multiply(inverse(a), b);
  std::vector<Element> path;
  path.reserve(static_cast<std::size_t>(d.norm) + 1);
  const int n = d.norm;
  for (int i = 0; i <= n; ++i) {
    Word first;
    Word second;
    if (spec_.kind == GroupKind::direct_product_of_free) {
      // A component of length m waits n - m steps, then walks its own geodesic.
      const int lag0 = n - static_cast<int>(d.first.size());
      const int lag1 = n - static_cast<int>(d.second.size());
      first.assign(d.first.begin(), d.first.begin() + std::max(0, i - lag0));
      second.assign(d.second.begin(), d.second.begin() + std::max(0, i - lag1));
    } else {
      first.assign(d.first.begin(), d.first.begin() + i);
    }
    path.push_back(multiply(a, make(std::move(first), std::move(second))));
  }
  return path;
}

Element Group::parse(std::string_view text) const {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (spec_.kind == GroupKind::direct_product_of_free) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
      throw ParseError("product element must be written (u,v): " + std::string(text));
    std::string_view inner = text.substr(1, text.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("product element must have exactly two components: " + std::string(text));
    return make(parse_word(trim(inner.substr(0, comma)), spec_.ranks[0]),
                parse_word(trim(inner.substr(comma + 1)), spec_.ranks[1]));
  }
  return make(parse_word(text, spec_.ranks[0]));
}

std::string Group::format(const Element& e) const {
  if (spec_.kind == GroupKind::direct_product_of_free)
    return "(" + format_word(e.first) + "," + format_word(e.second) + ")";
  return format_word(e.first);
}

std::size_t Group::order() const {
  if (spec_.kind != GroupKind::finitely_presented) throw UsageError("group is infinite");
  return table_->size();
}

}  // namespace cogrowth
