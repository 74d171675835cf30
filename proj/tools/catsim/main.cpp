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


// catsim: config-driven experiment runner for the catqubit library.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <catqubit/catqubit.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"
#include "worker_pool.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInternal = 1;

struct Options {
  std::string preset;
  std::string config;
  std::string out = "out";
  std::string timestamp;
  int jobs = 0;
  std::optional<double> verify;
  std::vector<std::string> sets;
  std::string alphas;
  std::optional<double> ratio;
  std::optional<int> q;
  std::string beta;
};

fs::path preset_path(const std::string& name) {
  if (name.size() > 5 && name.ends_with(".toml")) return name;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("CATSIM_PRESET_DIR")) dirs.emplace_back(env);
#ifdef CATSIM_SOURCE_PRESETS
  dirs.emplace_back(CATSIM_SOURCE_PRESETS);
#endif
#ifdef CATSIM_INSTALL_PRESETS
  dirs.emplace_back(CATSIM_INSTALL_PRESETS);
#endif
  for (const auto& d : dirs) {
    const fs::path p = d / (name + ".toml");
    if (fs::exists(p)) return p;
  }
  throw catsim::ConfigError("unknown preset '" + name + "'");
}

json to_json(const catsim::Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

// complex literal "re", "re,im" or "re+imi"
std::pair<double, double> parse_complex(const std::string& s) {
  std::string t = s;
  std::erase(t, ' ');
  const auto comma = t.find(',');
  if (comma != std::string::npos) return {std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1))};
  if (!t.empty() && t.back() == 'i') {
    const auto split = t.find_last_of("+-", t.size() - 2);
    if (split == std::string::npos || split == 0) return {0.0, std::stod(t.substr(0, t.size() - 1))};
    return {std::stod(t.substr(0, split)), std::stod(t.substr(split, t.size() - 1 - split))};
  }
  return {std::stod(t), 0.0};
}

int run(const catsim::Command& cmd, const Options& opt) {
  catsim::Config cfg;
  if (!opt.preset.empty() && !opt.config.empty()) {
    throw catsim::ConfigError("--preset and --config are mutually exclusive");
  }
  if (!opt.preset.empty()) cfg = catsim::Config::load(preset_path(opt.preset).string());
  if (!opt.config.empty()) cfg = catsim::Config::load(opt.config);

  if (!opt.alphas.empty()) cfg.set("physics", "alphas", catsim::parse_range(opt.alphas));
  if (opt.ratio) cfg.set("physics", "ratio", *opt.ratio);
  if (opt.q) cfg.set("physics", "q", std::vector<double>{static_cast<double>(*opt.q)});
  if (!opt.beta.empty()) {
    try {
      const auto [re, im] = parse_complex(opt.beta);
      cfg.set("physics", "beta_re", re);
      cfg.set("physics", "beta_im", im);
    } catch (const std::logic_error&) {
      throw catsim::ConfigError("--beta expects re, re,im or re+imi: '" + opt.beta + "'");
    }
  }
  for (const auto& s : opt.sets) cfg.set(s);

  if (cfg.has("experiment", "command")) {
    const auto* c = std::get_if<std::string>(&cfg.sections().at("experiment").at("command"));
    if (c && !c->empty() && *c != cmd.name) {
      throw catsim::ConfigError("config is for '" + *c + "', not '" + cmd.name + "'");
    }
  }
  cfg.resolve(cmd.schema);
  cfg.set("experiment", "command", cmd.name);
  std::string id = cfg.string("experiment", "id");
  if (id.empty()) id = cmd.name;
  for (char ch : id) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      throw catsim::ConfigError("experiment.id may only hold letters, digits, '-', '_' and '.'");
    }
  }

  catsim::RunContext ctx;
  const auto cfg_jobs = cfg.integer("experiment", "jobs");
  if (opt.jobs < 0 || cfg_jobs < 0) throw catsim::ConfigError("jobs must be >= 0");
  ctx.jobs = opt.jobs > 0 ? opt.jobs : cfg_jobs > 0 ? static_cast<int>(cfg_jobs) : catsim::default_jobs();
  if (opt.verify) ctx.verify_fraction = *opt.verify;

  const fs::path out = opt.out;
  fs::create_directories(out);
  const std::string stamp = opt.timestamp.empty() ? catsim::utc_timestamp() : opt.timestamp;
  const std::string stem = catsim::unique_stem(out, id + "-" + stamp);

  const auto t0 = std::chrono::steady_clock::now();
  catsim::CommandResult result = cmd.run(cfg, ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const catsim::OutputRecord rec = catsim::write_csv(out, stem + ".csv", result.table);
  json echo = json::object();
  for (const auto& [section, table] : cfg.sections()) {
    for (const auto& [key, value] : table) echo[section][key] = to_json(value);
  }
  json manifest{{"schema_version", 1},
                {"tool", "catsim"},
                {"library_version", catqubit::kVersion},
                {"command", cmd.name},
                {"experiment", id},
                {"timestamp", stamp},
                {"config", echo},
                {"jobs", ctx.jobs},
                {"wall_time_seconds", wall},
                {"outputs", json::array({{{"path", rec.path},
                                          {"sha256", rec.sha256},
                                          {"rows", rec.rows},
                                          {"columns", rec.columns}}})},
                {"diagnostics", result.diagnostics},
                {"status", "ok"}};
  catsim::write_atomically(out / (stem + ".manifest.json"), manifest.dump(2) + "\n");
  std::cout << (out / rec.path).string() << "\n" << (out / (stem + ".manifest.json")).string() << "\n";
  return 0;
}

int fail(int code, const std::string& kind, const std::string& message, const std::string& command) {
  json rec{{"error", {{"exit_code", code}, {"kind", kind}, {"message", message}, {"command", command}}}};
  std::cerr << rec.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catsim: multi-photon cat-qubit simulations"};
  app.set_version_flag("--version", std::string("catsim ") + catqubit::kVersion);
  app.require_subcommand(1);
  Options opt;

  for (const auto& cmd : catsim::commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.summary);
    sub->add_option("--preset", opt.preset, "Preset name (presets/<name>.toml) or path");
    sub->add_option("--config", opt.config, "Config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_option("--jobs", opt.jobs, "Worker threads (0: all cores)");
    sub->add_option("--set", opt.sets, "Override, e.g. --set physics.n_bar=9");
    sub->add_option("--timestamp", opt.timestamp, "Fixed timestamp for output names");
    if (cmd.name == "sweep") {
      sub->add_option("--verify-numeric", opt.verify, "Fraction of points to integrate (max 0.05)");
    }
    if (cmd.name == "phase-flip-rate") {
      sub->add_option("--alphas", opt.alphas, "lo:hi:step or comma list");
      sub->add_option("--ratio", opt.ratio, "kappa_phi / kappa");
    }
    if (cmd.name == "kerr") {
      sub->add_option("--q", opt.q, "Number of components");
      sub->add_option("--beta", opt.beta, "Coherent amplitude: re, re,im or re+imi");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitConfig, "UsageError", e.what(), "");
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(catsim::find_command(name), opt);
  } catch (const catsim::ConfigError& e) {
    return fail(kExitConfig, "ConfigError", e.what(), name);
  } catch (const catqubit::InvalidArgument& e) {
    return fail(kExitConfig, e.kind(), e.what(), name);
  } catch (const catqubit::TruncationTooSmall& e) {
    return fail(kExitConfig, e.kind(), e.what(), name);
  } catch (const catqubit::Error& e) {
    return fail(kExitNumerical, e.kind(), e.what(), name);
  } catch (const std::exception& e) {
    return fail(kExitInternal, "InternalError", e.what(), name);
  }
}
