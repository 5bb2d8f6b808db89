#include "cogrowth/oracle.hpp"

#include <algorithm>

#include "cogrowth/errors.hpp"

namespace cogrowth {

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::finite_quotient_kernel: return "finite_quotient_kernel";
    case OracleKind::integer_homomorphism_kernel: return "integer_homomorphism_kernel";
    case OracleKind::free_product_quotient_kernel: return "free_product_quotient_kernel";
    case OracleKind::commutator_subgroup: return "commutator_subgroup";
  }
  return "unknown";
}

NormalSubgroupOracle NormalSubgroupOracle::finite_permutation(std::vector<std::vector<int>> images) {
  NormalSubgroupOracle o;
  o.kind_ = OracleKind::finite_quotient_kernel;
  for (const auto& p : images) o.degree_ = std::max(o.degree_, static_cast<int>(p.size()));
  for (auto& p : images) {
    std::vector<std::int32_t> perm(static_cast<std::size_t>(o.degree_));
    std::vector<std::int32_t> inv(static_cast<std::size_t>(o.degree_), -1);
    for (int i = 0; i < o.degree_; ++i) {
      int image = i < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(i)] : i;
      if (image < 0 || image >= o.degree_ || inv[static_cast<std::size_t>(image)] >= 0)
        throw UsageError("generator image is not a permutation");
      perm[static_cast<std::size_t>(i)] = image;
      inv[static_cast<std::size_t>(image)] = i;
    }
    o.images_.push_back(std::move(perm));
    o.inverse_images_.push_back(std::move(inv));
  }
  return o;
}

NormalSubgroupOracle NormalSubgroupOracle::integer(std::vector<long> images) {
  NormalSubgroupOracle o;
  o.kind_ = OracleKind::integer_homomorphism_kernel;
  for (long v : images) {
    o.images_.push_back({static_cast<std::int32_t>(v)});
    o.inverse_images_.push_back({static_cast<std::int32_t>(-v)});
  }
  return o;
}

NormalSubgroupOracle NormalSubgroupOracle::commutator(int abstract_rank) {
  NormalSubgroupOracle o;
  o.kind_ = OracleKind::commutator_subgroup;
  o.images_.assign(static_cast<std::size_t>(abstract_rank), {});
  o.inverse_images_.assign(static_cast<std::size_t>(abstract_rank), {});
  return o;
}

NormalSubgroupOracle NormalSubgroupOracle::free_product(std::vector<int> orders,
                                                        std::vector<std::vector<Syllable>> images) {
  NormalSubgroupOracle o;
  o.kind_ = OracleKind::free_product_quotient_kernel;
  for (int n : orders)
    if (n < 0 || n == 1) throw UsageError("factor orders must be 0 (infinite) or at least 2");
  o.orders_ = std::move(orders);
  for (const auto& word : images) {
    std::vector<std::int32_t> fwd;
    std::vector<std::int32_t> back;
    for (const Syllable& s : word) {
      if (s.factor < 0 || s.factor >= static_cast<int>(o.orders_.size()))
        throw UsageError("image refers to an unknown factor");
      fwd.push_back(s.factor);
      fwd.push_back(s.exponent);
    }
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      back.push_back(it->factor);
      back.push_back(-it->exponent);
    }
    o.images_.push_back(std::move(fwd));
    o.inverse_images_.push_back(std::move(back));
  }
  return o;
}

QuotientState NormalSubgroupOracle::identity() const {
  switch (kind_) {
    case OracleKind::finite_quotient_kernel: {
      QuotientState s(static_cast<std::size_t>(degree_));
      for (int i = 0; i < degree_; ++i) s[static_cast<std::size_t>(i)] = i;
      return s;
    }
    case OracleKind::integer_homomorphism_kernel: return QuotientState{0};
    case OracleKind::commutator_subgroup: return QuotientState(images_.size(), 0);
    case OracleKind::free_product_quotient_kernel: return {};
  }
  return {};
}

void NormalSubgroupOracle::push_syllable(QuotientState& state, int factor, int exponent) const {
  const int order = orders_[static_cast<std::size_t>(factor)];
  if (order > 0) {
    exponent %= order;
    if (exponent < 0) exponent += order;
  }
  if (exponent == 0) return;
  if (!state.empty() && state[state.size() - 2] == factor) {
    int e = state.back() + exponent;
    if (order > 0) e %= order;
    if (e == 0) {
      state.resize(state.size() - 2);
    } else {
      state.back() = e;
    }
    return;
  }
  if (state.size() >= kMaxStateLength)
    throw DiagnosticError("free product normal form exceeded the evaluation budget");
  state.push_back(factor);
  state.push_back(exponent);
}

void NormalSubgroupOracle::apply(QuotientState& state, Letter x) const {
  const std::size_t gen = static_cast<std::size_t>(letter_generator(x));
  const bool inv = letter_is_inverse(x);
  switch (kind_) {
    case OracleKind::finite_quotient_kernel: {
      const auto& p = inv ? inverse_images_[gen] : images_[gen];
      for (auto& v : state) v = p[static_cast<std::size_t>(v)];
      break;
    }
    case OracleKind::integer_homomorphism_kernel:
      state[0] += inv ? inverse_images_[gen][0] : images_[gen][0];
      break;
    case OracleKind::commutator_subgroup:
      state[gen] += inv ? -1 : 1;
      break;
    case OracleKind::free_product_quotient_kernel: {
      const auto& w = inv ? inverse_images_[gen] : images_[gen];
      for (std::size_t i = 0; i < w.size(); i += 2) push_syllable(state, w[i], w[i + 1]);
      break;
    }
  }
}

void NormalSubgroupOracle::multiply(QuotientState& state, const QuotientState& other) const {
  switch (kind_) {
    case OracleKind::finite_quotient_kernel:
      for (auto& v : state) v = other[static_cast<std::size_t>(v)];
      break;
    case OracleKind::integer_homomorphism_kernel:
    case OracleKind::commutator_subgroup:
      for (std::size_t i = 0; i < state.size(); ++i) state[i] += other[i];
      break;
    case OracleKind::free_product_quotient_kernel:
      for (std::size_t i = 0; i < other.size(); i += 2) push_syllable(state, other[i], other[i + 1]);
      break;
  }
}

bool NormalSubgroupOracle::is_trivial(const QuotientState& state) const {
  switch (kind_) {
    case OracleKind::finite_quotient_kernel:
      for (std::size_t i = 0; i < state.size(); ++i)
        if (state[i] != static_cast<std::int32_t>(i)) return false;
      return true;
    case OracleKind::integer_homomorphism_kernel:
    case OracleKind::commutator_subgroup:
      return std::all_of(state.begin(), state.end(), [](std::int32_t v) { return v == 0; });
    case OracleKind::free_product_quotient_kernel: return state.empty();
  }
  return false;
}

void NormalSubgroupOracle::check_compatible(const Group& group) const {
  if (abstract_rank() != group.abstract_rank())
    throw UsageError("oracle defines images for " + std::to_string(abstract_rank()) +
                     " generators but the group has " + std::to_string(group.abstract_rank()));
  for (const Word& r : group.spec().relators) {
    QuotientState s = identity();
    for (Letter x : r) apply(s, x);
    if (!is_trivial(s))
      throw UsageError("relator " + format_word(r) + " does not lie in the kernel");
  }
}

QuotientState NormalSubgroupOracle::image(const Group& group, const Element& g) const {
  check_compatible(group);
  QuotientState s = identity();
  for (Letter x : g.first) apply(s, x);
  const Letter shift = static_cast<Letter>(2 * group.spec().ranks[0]);
  for (Letter x : g.second) apply(s, static_cast<Letter>(x + shift));
  return s;
}

bool NormalSubgroupOracle::contains(const Group& group, const Element& g) const {
  return is_trivial(image(group, g));
}

}  // namespace cogrowth
