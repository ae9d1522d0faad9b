#include "crd/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crd/integrators.hpp"

namespace crd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  return true;
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() ||
      !std::isfinite(v))
    syntax(line, "expected a finite number, got '" + t + "'");
  return v;
}

ConfigValue parse_value(const std::string& text, int line) {
  const std::string t = trim(text);
  ConfigValue out;
  out.line = line;
  if (t.empty()) syntax(line, "missing value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"' || t.find('"', 1) != t.size() - 1)
      syntax(line, "unterminated string");
    out.value = t.substr(1, t.size() - 2);
  } else if (t == "true" || t == "false") {
    out.value = (t == "true");
  } else if (t.front() == '[') {
    if (t.back() != ']') syntax(line, "unterminated array");
    std::vector<double> items;
    const std::string body = trim(t.substr(1, t.size() - 2));
    if (!body.empty()) {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) items.push_back(parse_number(item, line));
    }
    out.value = std::move(items);
  } else {
    out.value = parse_number(t, line);
  }
  return out;
}

std::string render(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return "\"" + x + "\"";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          std::string s = "[";
          for (std::size_t i = 0; i < x.size(); ++i)
            s += (i ? ", " : "") + format_double(x[i]);
          return s + "]";
        }
      },
      v.value);
}

}  // namespace

const ConfigValue& ConfigTable::at(const std::string& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) fail(key, "is required");
  return it->second;
}

void ConfigTable::fail(const std::string& key, const std::string& what) const {
  std::string where = "[" + name + "]";
  auto it = entries.find(key);
  if (it != entries.end()) where += " (line " + std::to_string(it->second.line) + ")";
  throw ConfigError(where + " " + key + " " + what);
}

double ConfigTable::number(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* d = std::get_if<double>(&v.value)) return *d;
  fail(key, "must be a number");
}

double ConfigTable::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int ConfigTable::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "must be an integer");
  return static_cast<int>(v);
}

int ConfigTable::integer(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string ConfigTable::string(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* s = std::get_if<std::string>(&v.value)) return *s;
  fail(key, "must be a quoted string");
}

std::string ConfigTable::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool ConfigTable::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (const auto* b = std::get_if<bool>(&v.value)) return *b;
  fail(key, "must be true or false");
}

std::vector<double> ConfigTable::numbers(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* a = std::get_if<std::vector<double>>(&v.value)) return *a;
  if (const auto* d = std::get_if<double>(&v.value)) return {*d};
  fail(key, "must be an array of numbers");
}

std::vector<int> ConfigTable::integers(const std::string& key) const {
  std::vector<int> out;
  for (double v : numbers(key)) {
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "must contain integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void ConfigTable::require_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, v] : entries)
    if (!allowed.count(key))
      throw ConfigError("[" + name + "] (line " + std::to_string(v.line) +
                        ") unknown key '" + key + "'");
}

const ConfigTable* Config::section(const std::string& name) const {
  auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

const std::vector<ConfigTable>& Config::array(const std::string& name) const {
  static const std::vector<ConfigTable> empty;
  auto it = arrays.find(name);
  return it == arrays.end() ? empty : it->second;
}

void Config::require_sections(const std::set<std::string>& allowed) const {
  for (const auto& [name, t] : sections)
    if (!allowed.count(name))
      throw ConfigError("line " + std::to_string(t.line) + ": unknown section [" + name + "]");
  for (const auto& [name, list] : arrays)
    if (!allowed.count(name))
      throw ConfigError("line " + std::to_string(list.front().line) +
                        ": unknown table [[" + name + "]]");
}

std::vector<std::string> Config::echo() const {
  std::vector<std::string> out;
  for (const auto& [name, t] : sections)
    for (const auto& [key, v] : t.entries) out.push_back(name + "." + key + " = " + render(v));
  for (const auto& [name, list] : arrays)
    for (std::size_t i = 0; i < list.size(); ++i)
      for (const auto& [key, v] : list[i].entries)
        out.push_back(name + "[" + std::to_string(i) + "]." + key + " = " + render(v));
  return out;
}

Config parse_config(std::istream& in) {
  Config cfg;
  ConfigTable* current = nullptr;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.rfind("[[", 0) == 0) {
      if (s.size() < 5 || s.substr(s.size() - 2) != "]]") syntax(line, "malformed table header");
      const std::string name = trim(s.substr(2, s.size() - 4));
      if (!valid_name(name)) syntax(line, "invalid table name '" + name + "'");
      if (cfg.sections.count(name)) syntax(line, "[[" + name + "]] clashes with a section");
      auto& list = cfg.arrays[name];
      list.push_back(ConfigTable{name + "[" + std::to_string(list.size()) + "]", line, {}});
      current = &list.back();
    } else if (s.front() == '[') {
      if (s.back() != ']') syntax(line, "malformed section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (!valid_name(name)) syntax(line, "invalid section name '" + name + "'");
      if (cfg.sections.count(name) || cfg.arrays.count(name))
        syntax(line, "duplicate section [" + name + "]");
      current = &cfg.sections.emplace(name, ConfigTable{name, line, {}}).first->second;
    } else {
      const auto eq = s.find('=');
      if (eq == std::string::npos) syntax(line, "expected key = value");
      const std::string key = trim(s.substr(0, eq));
      if (!valid_name(key)) syntax(line, "invalid key '" + key + "'");
      if (current == nullptr) syntax(line, "key '" + key + "' outside any section");
      if (current->entries.count(key)) syntax(line, "duplicate key '" + key + "'");
      current->entries.emplace(key, parse_value(s.substr(eq + 1), line));
    }
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

Config parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace crd
