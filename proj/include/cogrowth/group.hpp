#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cogrowth/word.hpp"

namespace cogrowth {

enum class GroupKind { free, direct_product_of_free, finitely_presented };

std::string to_string(GroupKind kind);

struct GroupSpec {
  GroupKind kind = GroupKind::free;
  /// One rank for free and finitely presented groups, two for a product.
  std::vector<int> ranks{2};
  /// Relators of a finitely presented group.
  std::vector<Word> relators;
  int radius_bound = 16;
  std::size_t coset_limit = 2'000'000;
};

/// Group element in canonical form. Free groups use `first` as the reduced
/// word; products use (`first`, `second`); finitely presented groups store
/// the shortlex-least representative word in `first`.
struct Element {
  Word first;
  Word second;
  int norm = 0;

  friend bool operator==(const Element& a, const Element& b) {
    return a.first == b.first && a.second == b.second;
  }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    WordHash h;
    return h(e.first) * 0x9e3779b97f4a7c15ULL ^ h(e.second);
  }
};

class FiniteCayleyTable;

/// Word metric on a finitely generated group. For the direct product the
/// generating set is (S u 1) x (S u 1), so the norm of (u, v) is
/// max(|u|, |v|).
class Group {
 public:
  explicit Group(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  GroupKind kind() const { return spec_.kind; }
  bool is_free() const { return spec_.kind == GroupKind::free; }
  bool is_product() const { return spec_.kind == GroupKind::direct_product_of_free; }
  /// Number of abstract generators (sum of factor ranks for a product).
  int abstract_rank() const;
  int radius_bound() const { return spec_.radius_bound; }

  Element identity() const { return Element{}; }
  /// Canonicalises words into an element (reduces, or rewrites to normal form).
  Element make(Word first, Word second = {}) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  int distance(const Element& a, const Element& b) const;
  /// Metric generators in their fixed order.
  const std::vector<Element>& metric_generators() const { return generators_; }

  /// Element order inside a sphere: (norm, first, second) with words in shortlex.
  bool element_less(const Element& a, const Element& b) const;

  /// Throws ResourceError if r exceeds the declared radius bound.
  void check_radius(int r) const;

  /// Visits every element of the closed ball of radius r, sphere by sphere,
  /// in element order within each sphere.
  void enumerate_ball(int r, const std::function<void(const Element&)>& visit) const;
  void enumerate_sphere(int r, const std::function<void(const Element&)>& visit) const;
  std::vector<Element> ball(int r) const;

  /// Closed-ball cardinality (closed form for free groups and products).
  std::uint64_t ball_size(int r) const;
  /// Dense index of an element of the closed ball of radius r, and its inverse.
  std::uint64_t ball_index(const Element& e, int r) const;
  Element ball_element(std::uint64_t index, int r) const;

  /// Shortlex-first geodesic from a to b (inclusive). In a free group it is
  /// the unique tree geodesic.
  std::vector<Element> geodesic(const Element& a, const Element& b) const;

  Element parse(std::string_view text) const;
  std::string format(const Element& e) const;

  /// Finite groups only: number of elements.
  std::size_t order() const;

 private:
  int compute_norm(const Element& e) const;

  GroupSpec spec_;
  std::vector<Element> generators_;
  std::shared_ptr<const FiniteCayleyTable> table_;
};

/// Closed-ball size of the free group of rank `rank`.
std::uint64_t free_ball_size(int rank, int r);
/// Shortlex rank of a reduced word among all reduced words of norm <= |w|.
std::uint64_t free_word_index(const Word& w, int rank);
Word free_word_at(std::uint64_t index, int rank);

/// Visits all reduced words of length n in lexicographic order.
template <class Visit>
void for_each_reduced_word(int rank, int n, Visit&& visit) {
  const int letters = 2 * rank;
  Word w(static_cast<std::size_t>(n));
  if (n == 0) {
    visit(static_cast<const Word&>(w));
    return;
  }
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  int depth = 0;
  while (depth >= 0) {
    int& x = next[static_cast<std::size_t>(depth)];
    if (depth > 0 && x == (w[static_cast<std::size_t>(depth - 1)] ^ 1)) ++x;
    if (x >= letters) {
      x = 0;
      --depth;
      continue;
    }
    w[static_cast<std::size_t>(depth)] = static_cast<Letter>(x);
    ++x;
    if (depth + 1 == n) {
      visit(static_cast<const Word&>(w));
    } else {
      ++depth;
    }
  }
}

}  // namespace cogrowth
