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

#include <filesystem>
#include <string>
#include <variant>
#include <vector>


namespace catsim {

using Cell = std::variant<double, std::string>;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct OutputRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t rows;
  std::vector<std::string> columns;
};

/// Nine significant digits, "nan"/"inf" spelled out.
std::string format_number(double v);

/// Writes UTF-8 CSV with LF line ends and returns its checksum record.
OutputRecord write_csv(const std::filesystem::path& dir, const std::string& name, const CsvTable& t);

std::string sha256_file(const std::filesystem::path& p);

/// Writes through a temporary file in the same directory and renames it.
void write_atomically(const std::filesystem::path& p, const std::string& content);

/// UTC time as 20261016T081500Z.
std::string utc_timestamp();

/// `stem` if unused in `dir`, else `stem-1`, `stem-2`, ...
std::string unique_stem(const std::filesystem::path& dir, const std::string& stem);

}  // namespace catsim
