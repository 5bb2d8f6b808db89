#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogrowth/group.hpp"
#include "cogrowth/oracle.hpp"

namespace cogrowth {

/// Ordered key=value lines. Blank lines and lines starting with '#' are
/// skipped; duplicate keys and lines without '=' are ParseErrors.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  /// Throws ParseError naming the first key not in `allowed`.
  void require_known(const std::vector<std::string_view>& allowed) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

int parse_int(std::string_view text, std::string_view what);
std::vector<std::string> split(std::string_view text, char sep);

GroupSpec parse_group_spec(std::string_view text);
std::string format_group_spec(const GroupSpec& spec);

/// Oracle spec for the given group. Product generators are written with a
/// factor prefix, e.g. 1.a and 2.b.
NormalSubgroupOracle parse_oracle_spec(std::string_view text, const Group& group);

std::string read_file(const std::string& path);

}  // namespace cogrowth
