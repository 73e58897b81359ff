#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mirrorvis/types.hpp"

namespace mirrorvis::config {

// Flat `key = value` files. `#` starts a comment anywhere on a line, blank
// lines are skipped, keys may not repeat. Values keep internal spaces but
// are trimmed at both ends.
class KeyValues {
 public:
  static KeyValues parse_file(const std::string& path);
  static KeyValues parse_string(std::string_view text);

  bool has(const std::string& key) const;

  // Getters throw InvalidParams when the key is missing (no-fallback form)
  // or the value does not parse exactly.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  Real get_real(const std::string& key) const;
  Real get_real(const std::string& key, Real fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key) const;  // comma-separated

  // Rejects any key outside `allowed`. Callers pass the schema of the
  // subcommand so typos fail loudly instead of being ignored.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace mirrorvis::config
