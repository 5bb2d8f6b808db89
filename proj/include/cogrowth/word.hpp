#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogrowth {

/// A letter over a free alphabet. Generator i is encoded as 2*i and its
/// inverse as 2*i+1, so the numeric order of letters is a < A < b < B < ...
/// and lexicographic comparison of equal-length words is shortlex order.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

constexpr int kMaxRank = 25;

constexpr Letter inverse_letter(Letter x) noexcept { return static_cast<Letter>(x ^ 1u); }
constexpr Letter generator_letter(int i) noexcept { return static_cast<Letter>(2 * i); }
constexpr int letter_generator(Letter x) noexcept { return x >> 1; }
constexpr bool letter_is_inverse(Letter x) noexcept { return (x & 1u) != 0; }

/// Printable name of generator i: a, b, c, d, f, g, ... ('e' is the identity).
char generator_name(int i);

bool is_reduced(std::span<const Letter> w);
bool is_cyclically_reduced(std::span<const Letter> w);

/// Freely reduces w.
Word reduce_word(std::span<const Letter> w);

/// x := reduce(x * y), assuming x and y are reduced.
void append_reduced(Word& x, std::span<const Letter> y);

Word multiply_words(std::span<const Letter> x, std::span<const Letter> y);
Word inverse_word(std::span<const Letter> w);
Word power_word(std::span<const Letter> w, long n);

/// Shortlex order: shorter first, then lexicographic in letter order.
bool shortlex_less(std::span<const Letter> x, std::span<const Letter> y);

/// Length of the longest common prefix.
std::size_t common_prefix(std::span<const Letter> x, std::span<const Letter> y);

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicReduction {
  Word conjugator;
  Word core;
};
CyclicReduction cyclically_reduce(std::span<const Letter> w);

/// Smallest r with w = r^k for some k >= 1 (w cyclically reduced).
Word primitive_root(std::span<const Letter> w);

std::string format_word(std::span<const Letter> w);

/// Parses letters of a rank-`rank` alphabet; "e" or "1" is the identity.
/// The result is freely reduced. Throws ParseError.
Word parse_word(std::string_view text, int rank);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(w.data()), w.size()));
  }
};

}  // namespace cogrowth
