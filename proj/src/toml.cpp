#include "transleak/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "transleak/errors.hpp"

namespace transleak {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("toml: line " + std::to_string(line) + ": " + what);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.')) {
      return false;
    }
  }
  return true;
}

// Parses one scalar or array token; `rest` starts at the value.
TomlValue parse_value(const std::string& rest, int line);

std::vector<std::string> split_array_items(const std::string& body, int line) {
  std::vector<std::string> items;
  std::string current;
  bool in_string = false;
  int depth = 0;
  for (char c : body) {
    if (c == '"') in_string = !in_string;
    if (!in_string) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == ',' && depth == 0) {
        items.push_back(trim(current));
        current.clear();
        continue;
      }
    }
    current += c;
  }
  if (in_string || depth != 0) fail(line, "unterminated array or string");
  const std::string last = trim(current);
  if (!last.empty()) items.push_back(last);
  return items;
}

TomlValue parse_value(const std::string& rest, int line) {
  TomlValue v;
  v.line = line;
  if (rest.empty()) fail(line, "missing value");
  if (rest.front() == '"') {
    if (rest.size() < 2 || rest.back() != '"') fail(line, "unterminated string");
    v.kind = TomlValue::Kind::string;
    v.str = rest.substr(1, rest.size() - 2);
    return v;
  }
  if (rest == "true" || rest == "false") {
    v.kind = TomlValue::Kind::boolean;
    v.boolean = (rest == "true");
    return v;
  }
  if (rest.front() == '[') {
    if (rest.back() != ']') fail(line, "unterminated array");
    v.kind = TomlValue::Kind::array;
    for (const std::string& item : split_array_items(rest.substr(1, rest.size() - 2), line)) {
      v.array.push_back(parse_value(item, line));
    }
    return v;
  }
  char* end = nullptr;
  v.number = std::strtod(rest.c_str(), &end);
  if (end == rest.c_str() || *end != '\0') fail(line, "cannot parse value '" + rest + "'");
  v.kind = TomlValue::Kind::number;
  return v;
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

}  // namespace

void TomlTable::insert(const std::string& key, TomlValue value) {
  if (entries_.count(key)) {
    fail(value.line, "duplicate key '" + key + "'");
  }
  entries_[key] = std::move(value);
}

bool TomlTable::has(const std::string& key) const { return entries_.count(key) > 0; }

const TomlValue& TomlTable::lookup(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("toml: missing key '" + key + "'");
  return it->second;
}

double TomlTable::require_number(const std::string& key) const {
  const TomlValue& v = lookup(key);
  if (v.kind != TomlValue::Kind::number) {
    fail(v.line, "key '" + key + "' must be a number");
  }
  return v.number;
}

double TomlTable::number_or(const std::string& key, double fallback) const {
  return has(key) ? require_number(key) : fallback;
}

std::string TomlTable::require_string(const std::string& key) const {
  const TomlValue& v = lookup(key);
  if (v.kind != TomlValue::Kind::string) {
    fail(v.line, "key '" + key + "' must be a string");
  }
  return v.str;
}

std::string TomlTable::string_or(const std::string& key,
                                 const std::string& fallback) const {
  return has(key) ? require_string(key) : fallback;
}

bool TomlTable::bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const TomlValue& v = lookup(key);
  if (v.kind != TomlValue::Kind::boolean) {
    fail(v.line, "key '" + key + "' must be a boolean");
  }
  return v.boolean;
}

std::vector<double> TomlTable::require_number_array(const std::string& key) const {
  const TomlValue& v = lookup(key);
  std::vector<double> out;
  if (v.kind == TomlValue::Kind::number) {
    out.push_back(v.number);
    return out;
  }
  if (v.kind != TomlValue::Kind::array) {
    fail(v.line, "key '" + key + "' must be an array of numbers");
  }
  for (const TomlValue& item : v.array) {
    if (item.kind != TomlValue::Kind::number) {
      fail(item.line, "key '" + key + "' must contain only numbers");
    }
    out.push_back(item.number);
  }
  return out;
}

std::vector<double> TomlTable::number_array_or(
    const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? require_number_array(key) : fallback;
}

std::vector<std::string> TomlTable::string_array_or(
    const std::string& key, const std::vector<std::string>& fallback) const {
  if (!has(key)) return fallback;
  const TomlValue& v = lookup(key);
  std::vector<std::string> out;
  if (v.kind == TomlValue::Kind::string) {
    out.push_back(v.str);
    return out;
  }
  if (v.kind != TomlValue::Kind::array) {
    fail(v.line, "key '" + key + "' must be an array of strings");
  }
  for (const TomlValue& item : v.array) {
    if (item.kind != TomlValue::Kind::string) {
      fail(item.line, "key '" + key + "' must contain only strings");
    }
    out.push_back(item.str);
  }
  return out;
}

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) fail(line_no, "bad section name '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) fail(line_no, "bad key '" + key + "'");
    TomlValue value = parse_value(trim(line.substr(eq + 1)), line_no);
    table.insert(section.empty() ? key : section + "." + key, std::move(value));
  }
  return table;
}

TomlTable parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

}  // namespace transleak
