#include "cogrowth/word.hpp"

#include <algorithm>
#include <cctype>

#include "cogrowth/errors.hpp"

namespace cogrowth {

char generator_name(int i) {
  if (i < 0 || i >= kMaxRank) throw UsageError("generator index out of range");
  char c = static_cast<char>('a' + i);
  return c >= 'e' ? static_cast<char>(c + 1) : c;
}

namespace {

int generator_index(char lower) {
  if (lower < 'a' || lower > 'z' || lower == 'e') return -1;
  return lower < 'e' ? lower - 'a' : lower - 'a' - 1;
}

}  // namespace

bool is_reduced(std::span<const Letter> w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse_letter(w[i - 1])) return false;
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> w) {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != inverse_letter(w.back());
}

Word reduce_word(std::span<const Letter> w) {
  Word out;
  out.reserve(w.size());
  for (Letter x : w) {
    if (!out.empty() && out.back() == inverse_letter(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

void append_reduced(Word& x, std::span<const Letter> y) {
  std::size_t k = 0;
  while (k < y.size() && !x.empty() && x.back() == inverse_letter(y[k])) {
    x.pop_back();
    ++k;
  }
  x.insert(x.end(), y.begin() + static_cast<std::ptrdiff_t>(k), y.end());
}

Word multiply_words(std::span<const Letter> x, std::span<const Letter> y) {
  Word out;
  out.reserve(x.size() + y.size());
  out.assign(x.begin(), x.end());
  append_reduced(out, y);
  return out;
}

Word inverse_word(std::span<const Letter> w) {
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = inverse_letter(w[w.size() - 1 - i]);
  return out;
}

Word power_word(std::span<const Letter> w, long n) {
  Word base = n < 0 ? inverse_word(w) : Word(w.begin(), w.end());
  long count = n < 0 ? -n : n;
  Word out;
  if (is_cyclically_reduced(base)) {
    out.reserve(base.size() * static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
  }
  for (long i = 0; i < count; ++i) append_reduced(out, base);
  return out;
}

bool shortlex_less(std::span<const Letter> x, std::span<const Letter> y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::size_t common_prefix(std::span<const Letter> x, std::span<const Letter> y) {
  std::size_t n = std::min(x.size(), y.size());
  std::size_t i = 0;
  while (i < n && x[i] == y[i]) ++i;
  return i;
}

CyclicReduction cyclically_reduce(std::span<const Letter> w) {
  Word r = reduce_word(w);
  std::size_t k = 0;
  while (2 * k + 1 < r.size() && r[k] == inverse_letter(r[r.size() - 1 - k])) ++k;
  CyclicReduction out;
  out.conjugator.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
  out.core.assign(r.begin() + static_cast<std::ptrdiff_t>(k),
                  r.end() - static_cast<std::ptrdiff_t>(k));
  return out;
}

Word primitive_root(std::span<const Letter> w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = w[i] == w[i - d];
    if (periodic) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return Word(w.begin(), w.end());
}

std::string format_word(std::span<const Letter> w) {
  if (w.empty()) return "e";
  std::string out;
  out.reserve(w.size());
  for (Letter x : w) {
    char c = generator_name(letter_generator(x));
    out.push_back(letter_is_inverse(x) ? static_cast<char>(std::toupper(c)) : c);
  }
  return out;
}

Word parse_word(std::string_view text, int rank) {
  if (text == "e" || text == "1") return {};
  if (text.empty()) throw ParseError("empty word");
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    bool inverse = std::isupper(static_cast<unsigned char>(c)) != 0;
    int g = generator_index(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (g < 0 || g >= rank)
      throw ParseError(std::string("unknown generator '") + c + "' in word '" + std::string(text) + "'");
    w.push_back(static_cast<Letter>(generator_letter(g) | (inverse ? 1 : 0)));
  }
  return reduce_word(w);
}

}  // namespace cogrowth
