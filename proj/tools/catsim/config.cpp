// Copyright 2026 The catqubit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace catsim {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing comment, ignoring '#' inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool is_bare_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kBool: return "boolean";
    case Kind::kInt: return "integer";
    case Kind::kReal: return "number";
    case Kind::kString: return "string";
    case Kind::kRealList: return "number list";
  }
  return "?";
}

}  // namespace

Value parse_value(const std::string& literal) {
  const std::string s = trim(literal);
  if (s.empty()) throw ConfigError("empty value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ConfigError("unterminated string: " + s);
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        const char n = s[++i];
        out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
      } else {
        out += s[i];
      }
    }
    return out;
  }
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError("unterminated array: " + s);
    std::vector<double> out;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      const Value v = parse_value(t);
      if (const auto* i = std::get_if<std::int64_t>(&v)) {
        out.push_back(static_cast<double>(*i));
      } else if (const auto* d = std::get_if<double>(&v)) {
        out.push_back(*d);
      } else {
        throw ConfigError("arrays hold numbers only: " + s);
      }
    }
    return out;
  }
  std::string num;
  for (char c : s) {
    if (c != '_') num += c;
  }
  if (!num.empty() && num.front() == '+') num.erase(0, 1);
  if (num.find_first_of(".eE") == std::string::npos && num.find("inf") == std::string::npos &&
      num.find("nan") == std::string::npos) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec == std::errc{} && p == num.data() + num.size()) return v;
    throw ConfigError("not a value: '" + s + "' (strings need quotes)");
  }
  return parse_real(num);
}

std::vector<double> parse_range(const std::string& text) {
  const std::string s = trim(text);
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_real(trim(item)));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError("range must be lo:hi:step with step > 0 and hi >= lo: " + s);
    }
    // Indexing from lo avoids accumulating the step.
    const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 0.5));
    for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(parse_real(t));
  }
  if (out.empty()) throw ConfigError("empty list: " + s);
  return out;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::stringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + "malformed table header");
      section = trim(t.substr(1, t.size() - 2));
      if (!is_bare_key(section)) throw ConfigError(where + "bad table name '" + section + "'");
      if (c.data_.count(section) != 0) throw ConfigError(where + "duplicate table [" + section + "]");
      c.data_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a table");
    const std::string key = trim(t.substr(0, eq));
    if (!is_bare_key(key)) throw ConfigError(where + "bad key '" + key + "'");
    auto& table = c.data_[section];
    if (table.count(key) != 0) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      table[key] = parse_value(t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  }
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  if (!is_bare_key(section) || !is_bare_key(key)) {
    throw ConfigError("bad override target: '" + assignment + "'");
  }
  set(section, key, parse_value(assignment.substr(eq + 1)));
}

void Config::set(const std::string& section, const std::string& key, Value v) {
  data_[section][key] = std::move(v);
}

void Config::resolve(const std::vector<KeySpec>& schema) {
  for (const auto& [section, table] : data_) {
    for (const auto& [key, value] : table) {
      bool known = false;
      for (const auto& s : schema) known = known || (s.section == section && s.key == key);
      if (!known) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }
  for (const auto& s : schema) {
    auto& table = data_[s.section];
    auto it = table.find(s.key);
    if (it == table.end()) {
      table[s.key] = s.fallback;
      continue;
    }
    Value& v = it->second;
    const bool ok = [&] {
      switch (s.kind) {
        case Kind::kBool: return std::holds_alternative<bool>(v);
        case Kind::kInt: return std::holds_alternative<std::int64_t>(v);
        case Kind::kString: return std::holds_alternative<std::string>(v);
        case Kind::kReal:
          if (std::holds_alternative<std::int64_t>(v)) v = static_cast<double>(std::get<std::int64_t>(v));
          return std::holds_alternative<double>(v);
        case Kind::kRealList:
          if (std::holds_alternative<std::string>(v)) v = parse_range(std::get<std::string>(v));
          if (std::holds_alternative<double>(v)) v = std::vector<double>{std::get<double>(v)};
          if (std::holds_alternative<std::int64_t>(v)) {
            v = std::vector<double>{static_cast<double>(std::get<std::int64_t>(v))};
          }
          return std::holds_alternative<std::vector<double>>(v);
      }
      return false;
    }();
    if (!ok) {
      throw ConfigError("'" + s.section + "." + s.key + "' must be a " + kind_name(s.kind));
    }
  }
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = data_.find(section);
  return it != data_.end() && it->second.count(key) != 0;
}

const Value& Config::at(const std::string& section, const std::string& key) const {
  const auto it = data_.find(section);
  if (it == data_.end() || it->second.count(key) == 0) {
    throw ConfigError("missing key '" + section + "." + key + "'");
  }
  return it->second.at(key);
}

double Config::real(const std::string& section, const std::string& key) const {
  const Value& v = at(section, key);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ConfigError("'" + section + "." + key + "' is not a number");
}

std::int64_t Config::integer(const std::string& section, const std::string& key) const {
  if (const auto* i = std::get_if<std::int64_t>(&at(section, key))) return *i;
  throw ConfigError("'" + section + "." + key + "' is not an integer");
}

bool Config::boolean(const std::string& section, const std::string& key) const {
  if (const auto* b = std::get_if<bool>(&at(section, key))) return *b;
  throw ConfigError("'" + section + "." + key + "' is not a boolean");
}

const std::string& Config::string(const std::string& section, const std::string& key) const {
  if (const auto* s = std::get_if<std::string>(&at(section, key))) return *s;
  throw ConfigError("'" + section + "." + key + "' is not a string");
}

const std::vector<double>& Config::reals(const std::string& section, const std::string& key) const {
  if (const auto* l = std::get_if<std::vector<double>>(&at(section, key))) return *l;
  throw ConfigError("'" + section + "." + key + "' is not a number list");
}

}  // namespace catsim
