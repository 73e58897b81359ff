#include "mirrorvis/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mirrorvis/errors.hpp"

namespace mirrorvis::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& what) { throw InvalidParams(what); }

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    fail("config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

}  // namespace

KeyValues KeyValues::parse_string(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty())
      fail("config line " + std::to_string(line_no) + ": empty key");
    if (value.empty())
      fail("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    if (!kv.entries_.emplace(key, value).second)
      fail("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool KeyValues::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string KeyValues::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail("config key '" + key + "' is required");
  return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

Real KeyValues::get_real(const std::string& key) const {
  return parse_number<Real>(key, get_string(key));
}

Real KeyValues::get_real(const std::string& key, Real fallback) const {
  return has(key) ? get_real(key) : fallback;
}

long KeyValues::get_long(const std::string& key) const {
  return parse_number<long>(key, get_string(key));
}

long KeyValues::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::uint64_t KeyValues::get_u64(const std::string& key) const {
  return parse_number<std::uint64_t>(key, get_string(key));
}

std::uint64_t KeyValues::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<int> KeyValues::get_int_list(const std::string& key) const {
  const std::string text = get_string(key);
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item{trim(std::string_view(text).substr(start, comma - start))};
    if (item.empty()) fail("config key '" + key + "': empty list entry");
    out.push_back(parse_number<int>(key, item));
    start = comma + 1;
  }
  return out;
}

void KeyValues::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    (void)value;
    if (!allowed.count(key)) fail("unknown config key '" + key + "'");
  }
}

}  // namespace mirrorvis::config
