#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cogrowth/group.hpp"

namespace cogrowth {

enum class OracleKind {
  finite_quotient_kernel,
  integer_homomorphism_kernel,
  free_product_quotient_kernel,
  commutator_subgroup,
};

std::string to_string(OracleKind kind);

/// Image of an element in the quotient, in a kind-specific encoding.
using QuotientState = std::vector<std::int32_t>;

/// One syllable x_f^e of a free product of cyclic groups.
struct Syllable {
  int factor;
  int exponent;
};

/// Membership in a normal subgroup given as the kernel of a homomorphism.
/// Abstract generators are numbered factor by factor: for a direct product of
/// F_m and F_n, generators 0..m-1 belong to the first factor and m..m+n-1 to
/// the second. An abstract letter is 2*j or 2*j+1 as for words.
class NormalSubgroupOracle {
 public:
  /// images[j] is the permutation of {0..degree-1} assigned to generator j.
  static NormalSubgroupOracle finite_permutation(std::vector<std::vector<int>> images);
  /// Kernel of the map to Z sending generator j to images[j].
  static NormalSubgroupOracle integer(std::vector<long> images);
  /// Kernel of the abelianisation of a free group or product of free groups.
  static NormalSubgroupOracle commutator(int abstract_rank);
  /// orders[f] is the order of factor f (0 for infinite cyclic); images[j]
  /// is the image of generator j as a word in the factor generators.
  static NormalSubgroupOracle free_product(std::vector<int> orders,
                                           std::vector<std::vector<Syllable>> images);

  OracleKind kind() const { return kind_; }
  int abstract_rank() const { return static_cast<int>(images_.size()); }

  QuotientState identity() const;
  /// state := state * image(letter).
  void apply(QuotientState& state, Letter abstract_letter) const;
  /// state := state * other.
  void multiply(QuotientState& state, const QuotientState& other) const;
  bool is_trivial(const QuotientState& state) const;

  QuotientState image(const Group& group, const Element& g) const;
  bool contains(const Group& group, const Element& g) const;
  /// Throws UsageError unless the oracle matches the group's generators.
  void check_compatible(const Group& group) const;

  /// Upper bound on free-product normal form length before evaluation is
  /// reported as a diagnostic failure.
  static constexpr std::size_t kMaxStateLength = 1u << 20;

 private:
  OracleKind kind_ = OracleKind::commutator_subgroup;
  // Per generator: permutation images, integer images, or encoded syllables.
  std::vector<std::vector<std::int32_t>> images_;
  std::vector<std::vector<std::int32_t>> inverse_images_;
  std::vector<int> orders_;
  int degree_ = 0;

  void push_syllable(QuotientState& state, int factor, int exponent) const;
};

}  // namespace cogrowth
