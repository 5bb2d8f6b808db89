#include "cogrowth/todd_coxeter.hpp"

#include <deque>
#include <string>

#include "cogrowth/errors.hpp"

namespace cogrowth {

namespace {

// HLT coset enumeration with union-find coincidence handling.
class Enumerator {
 public:
  Enumerator(int letters, std::size_t limit) : letters_(letters), limit_(limit) { add_coset(); }

  void run(const std::vector<Word>& relators) {
    for (int a = 0; a < static_cast<int>(parent_.size()); ++a) {
      for (const Word& r : relators) {
        if (!alive(a)) break;
        scan_and_fill(a, r);
      }
      if (!alive(a)) continue;
      for (int x = 0; x < letters_; ++x)
        if (at(a, x) < 0) define(a, x);
    }
  }

  std::vector<int> compact(std::size_t& count) const {
    std::vector<int> renumber(parent_.size(), -1);
    count = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c)
      if (parent_[c] == static_cast<int>(c)) renumber[c] = static_cast<int>(count++);
    std::vector<int> out(count * static_cast<std::size_t>(letters_));
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (renumber[c] < 0) continue;
      for (int x = 0; x < letters_; ++x) {
        int d = at(static_cast<int>(c), x);
        if (d < 0) throw DiagnosticError("coset table incomplete after enumeration");
        out[static_cast<std::size_t>(renumber[c] * letters_ + x)] =
            renumber[static_cast<std::size_t>(rep_const(d))];
      }
    }
    return out;
  }

 private:
  int& at(int c, int x) { return table_[static_cast<std::size_t>(c * letters_ + x)]; }
  int at(int c, int x) const { return table_[static_cast<std::size_t>(c * letters_ + x)]; }
  bool alive(int c) const { return parent_[static_cast<std::size_t>(c)] == c; }

  int add_coset() {
    if (parent_.size() >= limit_)
      throw ResourceError("coset enumeration exceeded the coset limit of " + std::to_string(limit_));
    int c = static_cast<int>(parent_.size());
    parent_.push_back(c);
    table_.insert(table_.end(), static_cast<std::size_t>(letters_), -1);
    return c;
  }

  void define(int c, int x) {
    int d = add_coset();
    at(c, x) = d;
    at(d, x ^ 1) = c;
  }

  int rep(int c) {
    int r = c;
    while (parent_[static_cast<std::size_t>(r)] != r) r = parent_[static_cast<std::size_t>(r)];
    while (parent_[static_cast<std::size_t>(c)] != r) {
      int n = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = r;
      c = n;
    }
    return r;
  }

  int rep_const(int c) const {
    while (parent_[static_cast<std::size_t>(c)] != c) c = parent_[static_cast<std::size_t>(c)];
    return c;
  }

  void merge(int a, int b, std::deque<int>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    queue.push_back(b);
  }

  void coincidence(int a, int b) {
    std::deque<int> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      int g = queue.front();
      queue.pop_front();
      for (int x = 0; x < letters_; ++x) {
        int d = at(g, x);
        if (d < 0) continue;
        at(d, x ^ 1) = -1;
        int mu = rep(g);
        int nu = rep(d);
        if (at(mu, x) >= 0) {
          merge(nu, at(mu, x), queue);
        } else if (at(nu, x ^ 1) >= 0) {
          merge(mu, at(nu, x ^ 1), queue);
        } else {
          at(mu, x) = nu;
          at(nu, x ^ 1) = mu;
        }
      }
    }
  }

  void scan_and_fill(int a, const Word& w) {
    int f = a;
    int b = a;
    int i = 0;
    int j = static_cast<int>(w.size()) - 1;
    for (;;) {
      while (i <= j && at(f, w[static_cast<std::size_t>(i)]) >= 0) {
        f = at(f, w[static_cast<std::size_t>(i)]);
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, w[static_cast<std::size_t>(j)] ^ 1) >= 0) {
        b = at(b, w[static_cast<std::size_t>(j)] ^ 1);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        at(f, w[static_cast<std::size_t>(i)]) = b;
        at(b, w[static_cast<std::size_t>(i)] ^ 1) = f;
        return;
      }
      define(f, w[static_cast<std::size_t>(i)]);
    }
  }

  int letters_;
  std::size_t limit_;
  std::vector<int> table_;
  std::vector<int> parent_;
};

}  // namespace

FiniteCayleyTable::FiniteCayleyTable(int rank, const std::vector<Word>& relators,
                                     std::size_t coset_limit)
    : letters_(2 * rank) {
  Enumerator e(letters_, coset_limit);
  e.run(relators);
  std::size_t n = 0;
  std::vector<int> raw = e.compact(n);

  // Breadth-first search in letter order visits elements in shortlex order
  // of their least representatives; renumber accordingly.
  std::vector<int> order;
  std::vector<int> new_id(n, -1);
  std::vector<Word> words;
  order.reserve(n);
  order.push_back(0);
  new_id[0] = 0;
  words.emplace_back();
  for (std::size_t k = 0; k < order.size(); ++k) {
    int c = order[k];
    for (int x = 0; x < letters_; ++x) {
      int d = raw[static_cast<std::size_t>(c * letters_ + x)];
      if (new_id[static_cast<std::size_t>(d)] >= 0) continue;
      new_id[static_cast<std::size_t>(d)] = static_cast<int>(order.size());
      order.push_back(d);
      Word w = words[k];
      w.push_back(static_cast<Letter>(x));
      words.push_back(std::move(w));
    }
  }
  table_.assign(n * static_cast<std::size_t>(letters_), -1);
  for (std::size_t k = 0; k < n; ++k)
    for (int x = 0; x < letters_; ++x)
      table_[k * static_cast<std::size_t>(letters_) + static_cast<std::size_t>(x)] =
          new_id[static_cast<std::size_t>(raw[static_cast<std::size_t>(order[k] * letters_ + x)])];
  words_ = std::move(words);
  for (std::size_t k = 0; k < n; ++k) ids_.emplace(words_[k], static_cast<int>(k));
}

int FiniteCayleyTable::trace(int element, const Word& w) const {
  for (Letter x : w) element = act(element, x);
  return element;
}

int FiniteCayleyTable::id_of(const Word& canonical) const {
  auto it = ids_.find(canonical);
  return it == ids_.end() ? -1 : it->second;
}

}  // namespace cogrowth
