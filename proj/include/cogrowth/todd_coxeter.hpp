#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "cogrowth/word.hpp"

namespace cogrowth {

/// Right-regular Cayley table of a finite group given by a presentation,
/// obtained by coset enumeration over the trivial subgroup.
class FiniteCayleyTable {
 public:
  /// Throws ResourceError if more than `coset_limit` cosets are defined.
  FiniteCayleyTable(int rank, const std::vector<Word>& relators, std::size_t coset_limit);

  std::size_t size() const { return words_.size(); }
  int letters() const { return letters_; }
  int act(int element, Letter x) const { return table_[static_cast<std::size_t>(element * letters_ + x)]; }
  int trace(int element, const Word& w) const;
  /// Elements are numbered in shortlex order of their least representatives.
  const Word& word(int element) const { return words_[static_cast<std::size_t>(element)]; }
  int id_of(const Word& canonical) const;

 private:
  int letters_;
  std::vector<int> table_;
  std::vector<Word> words_;
  std::unordered_map<Word, int, WordHash> ids_;
};

}  // namespace cogrowth
