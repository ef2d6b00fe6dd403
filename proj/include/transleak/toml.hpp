#pragma once

#include <map>
#include <string>
#include <vector>

namespace transleak {

// Minimal TOML subset for scenario files: [sections], key = value with
// strings, booleans, numbers and flat arrays, # comments. Parse errors are
// ConfigError with line/key diagnostics.
struct TomlValue {
  enum class Kind { number, string, boolean, array } kind = Kind::number;
  double number = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<TomlValue> array;
  int line = 0;
};

class TomlTable {
 public:
  void insert(const std::string& key, TomlValue value);
  bool has(const std::string& key) const;

  double require_number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::string require_string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool bool_or(const std::string& key, bool fallback) const;
  std::vector<double> require_number_array(const std::string& key) const;
  std::vector<double> number_array_or(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<std::string> string_array_or(
      const std::string& key, const std::vector<std::string>& fallback) const;

  const std::map<std::string, TomlValue>& entries() const { return entries_; }

 private:
  const TomlValue& lookup(const std::string& key) const;
  std::map<std::string, TomlValue> entries_;
};

TomlTable parse_toml(const std::string& text);
TomlTable parse_toml_file(const std::string& path);

}  // namespace transleak
