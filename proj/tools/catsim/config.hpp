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


#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace catsim {

/// Raised for malformed or unknown configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

enum class Kind { kBool, kInt, kReal, kString, kRealList };

struct KeySpec {
  std::string section;
  std::string key;
  Kind kind;
  Value fallback;
};

/// Parsed key/value document with [experiment], [physics] and [numerics]
/// sections. Accepts a subset of TOML: tables, comments, strings, numbers,
/// booleans and flat numeric arrays.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  /// Applies `section.key=value`; the value uses the same literal syntax.
  void set(const std::string& assignment);
  void set(const std::string& section, const std::string& key, Value v);

  /// Rejects keys absent from `schema`, coerces integers to reals where a
  /// real is expected, checks kinds and fills defaults.
  void resolve(const std::vector<KeySpec>& schema);

  bool has(const std::string& section, const std::string& key) const;
  double real(const std::string& section, const std::string& key) const;
  std::int64_t integer(const std::string& section, const std::string& key) const;
  bool boolean(const std::string& section, const std::string& key) const;
  const std::string& string(const std::string& section, const std::string& key) const;
  const std::vector<double>& reals(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, Value>>& sections() const { return data_; }

 private:
  const Value& at(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Value>> data_;
};

Value parse_value(const std::string& literal);

/// Expands `lo:hi:step` (inclusive of hi within half a step) or a comma list.
std::vector<double> parse_range(const std::string& text);

}  // namespace catsim
