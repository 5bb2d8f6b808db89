#include "cogrowth/spec_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cogrowth/errors.hpp"

namespace cogrowth {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size()) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
    }
    if (i == text.size() || (text[i] == sep && depth == 0)) {
      out.emplace_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

int parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    if (kv.has(key)) throw ParseError("line " + std::to_string(line_no) + ": duplicate key " + key);
    kv.entries_.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

bool KeyValues::has(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

const std::string& KeyValues::get(std::string_view key) const {
  for (const auto& e : entries_)
    if (e.first == key) return e.second;
  throw ParseError("missing key " + std::string(key));
}

std::string KeyValues::get_or(std::string_view key, std::string fallback) const {
  return has(key) ? get(key) : fallback;
}

void KeyValues::require_known(const std::vector<std::string_view>& allowed) const {
  for (const auto& e : entries_)
    if (std::find(allowed.begin(), allowed.end(), e.first) == allowed.end())
      throw ParseError("unknown key " + e.first);
}

GroupSpec parse_group_spec(std::string_view text) {
  KeyValues kv = KeyValues::parse(text);
  kv.require_known({"kind", "rank", "ranks", "relators", "radius_bound", "coset_limit"});
  GroupSpec spec;
  const std::string& kind = kv.get("kind");
  if (kind == "free") {
    spec.kind = GroupKind::free;
  } else if (kind == "direct_product_of_free") {
    spec.kind = GroupKind::direct_product_of_free;
  } else if (kind == "finitely_presented") {
    spec.kind = GroupKind::finitely_presented;
  } else {
    throw ParseError("unknown group kind " + kind);
  }
  if (spec.kind == GroupKind::direct_product_of_free) {
    if (kv.has("rank")) throw ParseError("direct products take ranks=, not rank=");
    spec.ranks.clear();
    for (const auto& r : split(kv.get("ranks"), ',')) spec.ranks.push_back(parse_int(r, "ranks"));
    if (spec.ranks.size() != 2) throw ParseError("ranks must list exactly two factors");
  } else {
    if (kv.has("ranks")) throw ParseError("ranks= is only valid for direct products");
    spec.ranks = {parse_int(kv.get("rank"), "rank")};
  }
  for (int r : spec.ranks)
    if (r < 1 || r > kMaxRank) throw ParseError("rank must be between 1 and 25");
  if (kv.has("relators")) {
    if (spec.kind != GroupKind::finitely_presented)
      throw ParseError("relators= is only valid for finitely presented groups");
    for (const auto& r : split(kv.get("relators"), ',')) spec.relators.push_back(parse_word(r, spec.ranks[0]));
  } else if (spec.kind == GroupKind::finitely_presented) {
    throw ParseError("finitely presented groups need relators=");
  }
  if (kv.has("radius_bound")) spec.radius_bound = parse_int(kv.get("radius_bound"), "radius_bound");
  if (spec.radius_bound < 0) throw ParseError("radius_bound must be non-negative");
  if (kv.has("coset_limit")) {
    int limit = parse_int(kv.get("coset_limit"), "coset_limit");
    if (limit < 1) throw ParseError("coset_limit must be positive");
    spec.coset_limit = static_cast<std::size_t>(limit);
  }
  return spec;
}

std::string format_group_spec(const GroupSpec& spec) {
  std::ostringstream out;
  out << "kind=" << to_string(spec.kind) << "\n";
  if (spec.kind == GroupKind::direct_product_of_free)
    out << "ranks=" << spec.ranks[0] << "," << spec.ranks[1] << "\n";
  else
    out << "rank=" << spec.ranks[0] << "\n";
  if (!spec.relators.empty()) {
    out << "relators=";
    for (std::size_t i = 0; i < spec.relators.size(); ++i)
      out << (i ? "," : "") << format_word(spec.relators[i]);
    out << "\n";
  }
  out << "radius_bound=" << spec.radius_bound << "\n";
  return out.str();
}

namespace {

// Maps generator names ("a", or "1.a"/"2.a" for products) to abstract indices.
int abstract_generator(std::string_view name, const Group& group) {
  int offset = 0;
  int rank = group.spec().ranks[0];
  if (group.is_product()) {
    if (name.size() != 3 || name[1] != '.' || (name[0] != '1' && name[0] != '2'))
      throw ParseError("product generators are written 1.x or 2.x, got '" + std::string(name) + "'");
    if (name[0] == '2') {
      offset = group.spec().ranks[0];
      rank = group.spec().ranks[1];
    }
    name.remove_prefix(2);
  }
  if (name.size() != 1) throw ParseError("bad generator name '" + std::string(name) + "'");
  Word w = parse_word(name, rank);
  if (w.size() != 1 || letter_is_inverse(w[0]))
    throw ParseError("bad generator name '" + std::string(name) + "'");
  return offset + letter_generator(w[0]);
}

std::map<int, std::string> parse_images(const std::string& text, const Group& group) {
  std::map<int, std::string> out;
  for (const auto& item : split(text, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("image entries are written gen:image");
    int g = abstract_generator(trim(std::string_view(item).substr(0, colon)), group);
    if (out.count(g)) throw ParseError("duplicate image for a generator");
    out[g] = std::string(trim(std::string_view(item).substr(colon + 1)));
  }
  return out;
}

// Cycle notation on points 1..n, e.g. "(1 2)(3 4 5)" or "()".
std::vector<int> parse_cycles(std::string_view text) {
  std::vector<std::vector<int>> cycles;
  int degree = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    if (text[i] != '(') throw ParseError("permutation must be written in cycle notation");
    auto close = text.find(')', i);
    if (close == std::string_view::npos) throw ParseError("unbalanced parenthesis in permutation");
    std::vector<int> cycle;
    std::istringstream in{std::string(text.substr(i + 1, close - i - 1))};
    std::string tok;
    while (in >> tok) {
      int p = parse_int(tok, "permutation point");
      if (p < 1) throw ParseError("permutation points start at 1");
      cycle.push_back(p - 1);
      degree = std::max(degree, p);
    }
    cycles.push_back(std::move(cycle));
    i = close + 1;
  }
  std::vector<int> perm(static_cast<std::size_t>(degree));
  for (int k = 0; k < degree; ++k) perm[static_cast<std::size_t>(k)] = k;
  std::vector<bool> seen(static_cast<std::size_t>(degree), false);
  for (const auto& c : cycles) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (seen[static_cast<std::size_t>(c[k])]) throw ParseError("cycles must be disjoint");
      seen[static_cast<std::size_t>(c[k])] = true;
      perm[static_cast<std::size_t>(c[k])] = c[(k + 1) % c.size()];
    }
  }
  return perm;
}

// Words over x1, x2, ... with X1 for inverses and optional ^n exponents.
std::vector<Syllable> parse_factor_word(std::string_view text, int factors) {
  std::vector<Syllable> out;
  if (text == "e" || text == "1") return out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != 'x' && c != 'X') throw ParseError("factor words use x1, x2, ... (X1 for inverses)");
    std::size_t j = i + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i + 1) throw ParseError("factor generator needs an index");
    int f = parse_int(text.substr(i + 1, j - i - 1), "factor index") - 1;
    if (f < 0 || f >= factors) throw ParseError("factor index out of range");
    int e = 1;
    if (j < text.size() && text[j] == '^') {
      std::size_t k = j + 1;
      if (k < text.size() && text[k] == '-') ++k;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      e = parse_int(text.substr(j + 1, k - j - 1), "exponent");
      j = k;
    }
    out.push_back({f, c == 'X' ? -e : e});
    i = j;
  }
  return out;
}

}  // namespace

NormalSubgroupOracle parse_oracle_spec(std::string_view text, const Group& group) {
  KeyValues kv = KeyValues::parse(text);
  const std::string& quotient = kv.get("quotient");
  const int n = group.abstract_rank();
  auto missing = [&](const std::map<int, std::string>& images) {
    for (int g = 0; g < n; ++g)
      if (!images.count(g)) throw ParseError("missing image for generator " + std::to_string(g + 1));
  };
  NormalSubgroupOracle oracle = NormalSubgroupOracle::commutator(n);
  if (quotient == "finite_permutation") {
    kv.require_known({"quotient", "images"});
    auto images = parse_images(kv.get("images"), group);
    missing(images);
    std::vector<std::vector<int>> perms;
    for (int g = 0; g < n; ++g) perms.push_back(parse_cycles(images[g]));
    oracle = NormalSubgroupOracle::finite_permutation(std::move(perms));
  } else if (quotient == "integer") {
    kv.require_known({"quotient", "images"});
    auto images = parse_images(kv.get("images"), group);
    missing(images);
    std::vector<long> values;
    for (int g = 0; g < n; ++g) values.push_back(parse_int(images[g], "integer image"));
    oracle = NormalSubgroupOracle::integer(std::move(values));
  } else if (quotient == "commutator") {
    kv.require_known({"quotient"});
  } else if (quotient == "free_product") {
    kv.require_known({"quotient", "factors", "images"});
    std::vector<int> orders;
    for (const auto& f : split(kv.get("factors"), ',')) orders.push_back(parse_int(f, "factor order"));
    auto images = parse_images(kv.get("images"), group);
    missing(images);
    std::vector<std::vector<Syllable>> words;
    for (int g = 0; g < n; ++g)
      words.push_back(parse_factor_word(images[g], static_cast<int>(orders.size())));
    try {
      oracle = NormalSubgroupOracle::free_product(std::move(orders), std::move(words));
    } catch (const UsageError& e) {
      throw ParseError(e.what());
    }
  } else {
    throw ParseError("unknown quotient kind " + quotient);
  }
  try {
    oracle.check_compatible(group);
  } catch (const UsageError& e) {
    throw ParseError(e.what());
  }
  return oracle;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cogrowth
