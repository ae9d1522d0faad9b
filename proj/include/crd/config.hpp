#pragma once

// Sectioned key = value configuration files, a small TOML subset:
//
//   # comment
//   [grid]
//   n = 50
//   [carleman]
//   k = [2, 3]
//   repr = "grouped"
//   [[reaction]]
//   alpha = [2, 1]
//
// Values are numbers, quoted strings, true/false, or flat arrays of numbers.

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "crd/common.hpp"

namespace crd {

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct ConfigValue {
  std::variant<double, std::string, bool, std::vector<double>> value;
  int line = 0;
};

class ConfigTable {
 public:
  std::string name;
  int line = 0;
  std::map<std::string, ConfigValue> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  /// Throws ConfigError naming the first key outside `allowed`.
  void require_keys(const std::set<std::string>& allowed) const;

 private:
  const ConfigValue& at(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

struct Config {
  std::map<std::string, ConfigTable> sections;
  std::map<std::string, std::vector<ConfigTable>> arrays;

  const ConfigTable* section(const std::string& name) const;
  const std::vector<ConfigTable>& array(const std::string& name) const;
  void require_sections(const std::set<std::string>& allowed) const;

  /// Canonical one-line-per-key dump, sorted, used as parameter echo.
  std::vector<std::string> echo() const;
};

Config parse_config(std::istream& in);
Config parse_config_file(const std::string& path);
Config parse_config_string(const std::string& text);

}  // namespace crd
