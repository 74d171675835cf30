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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "output.hpp"

namespace catsim {

struct RunContext {
  int jobs = 1;
  double verify_fraction = -1.0;  // sweep only; negative defers to the config
};

struct CommandResult {
  CsvTable table;
  nlohmann::json diagnostics = nlohmann::json::object();
};

struct Command {
  std::string name;
  std::string summary;
  std::vector<KeySpec> schema;  // includes the shared [experiment] keys
  std::function<CommandResult(const Config&, const RunContext&)> run;
};

const std::vector<Command>& commands();
const Command& find_command(const std::string& name);

}  // namespace catsim
