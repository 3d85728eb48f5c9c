// Command-line front end: run scenarios, sweep one parameter, validate
// config files. Exit codes: 0 ok, 2 config error, 1 runtime error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ubtcp/config.h"
#include "ubtcp/report_export.h"
#include "ubtcp/scenario.h"

namespace fs = std::filesystem;
using namespace ubtcp;

namespace {

constexpr int kConfigErrorExit = 2;
constexpr int kRuntimeErrorExit = 1;

struct CommonOptions {
  std::string scenario = "efficiency";
  std::string controller = "ub";
  std::string seeds = "42";
  std::string config;
  std::vector<std::string> overrides;
  std::string out = "out";
  int jobs = 1;
};

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario,
                  "efficiency|goodput_static|goodput_mobile|cwnd|bandwidth, "
                  "a comma list, or all");
  cmd->add_option("--controller", o.controller, "ub|vegas|westwood|all or a comma list");
  cmd->add_option("--seed", o.seeds, "seed or comma list of seeds");
  cmd->add_option("--config", o.config, "key = value config file");
  cmd->add_option("--set", o.overrides, "extra key=value override (repeatable)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& s : SplitList(text)) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("bad seed '" + s + "'");
    }
    seeds.push_back(v);
  }
  if (seeds.empty()) throw ConfigError("no seed given");
  return seeds;
}

std::vector<ScenarioName> ParseScenarios(const std::string& text) {
  if (text == "all") return AllScenarios();
  std::vector<ScenarioName> out;
  for (const std::string& s : SplitList(text)) out.push_back(ParseScenarioName(s));
  if (out.empty()) throw ConfigError("no scenario given");
  return out;
}

std::vector<Setting> UserSettings(const CommonOptions& o) {
  std::vector<Setting> settings;
  if (!o.config.empty()) settings = LoadConfigFile(o.config);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    for (Setting s : ParseConfigText(kv)) settings.push_back(std::move(s));
  }
  return settings;
}

ScenarioPlan BuildPlan(ScenarioName name, const CommonOptions& o,
                       const std::vector<Setting>& settings) {
  ScenarioPlan plan;
  plan.name = name;
  plan.controllers = ParseControllerList(o.controller);
  plan.seeds = ParseSeeds(o.seeds);
  plan.config = ScenarioDefaults(name);
  ApplySettings(plan.config, settings);
  plan.Validate();
  return plan;
}

fs::path RunDir(const fs::path& root, const MetricsReport& r) {
  return root / std::string(ToString(r.scenario)) /
         std::string(ToString(r.controller)) / ("seed_" + std::to_string(r.seed));
}

// Runs every requested scenario, exporting into `root`. Returns the summary
// rows in (scenario, controller, seed) order.
std::vector<SummaryRow> RunAll(const CommonOptions& o,
                               const std::vector<Setting>& settings,
                               const fs::path& root) {
  std::vector<SummaryRow> rows;
  for (ScenarioName name : ParseScenarios(o.scenario)) {
    const ScenarioPlan plan = BuildPlan(name, o, settings);
    for (const MetricsReport& r : RunMatrix(plan, o.jobs)) {
      ExportRun(r, RunDir(root, r));
      rows.push_back(Summarize(r));
    }
  }
  return rows;
}

int CmdRun(const CommonOptions& o) {
  const auto settings = UserSettings(o);
  // Resolve every plan before running anything so config errors come first.
  for (ScenarioName name : ParseScenarios(o.scenario)) BuildPlan(name, o, settings);
  const fs::path root(o.out);
  const auto rows = RunAll(o, settings, root);
  fs::create_directories(root);
  WriteTextFile(root / "summary.csv", SummaryCsv(rows));
  std::cout << "wrote " << rows.size() << " runs to " << root.string() << "\n";
  return 0;
}

int CmdSweep(const CommonOptions& o, const std::string& param,
             const std::string& values_text) {
  const auto base = UserSettings(o);
  const auto values = SplitList(values_text);
  if (values.empty()) throw ConfigError("--values is empty");
  // Reject an unknown key or bad value before any run.
  for (const std::string& v : values) {
    auto settings = base;
    settings.push_back(Setting{param, v, 0});
    for (ScenarioName name : ParseScenarios(o.scenario)) BuildPlan(name, o, settings);
  }

  const fs::path root(o.out);
  std::string sweep_csv = "param,value," + std::string(kSummaryHeader) + "\n";
  std::size_t runs = 0;
  for (const std::string& v : values) {
    auto settings = base;
    settings.push_back(Setting{param, v, 0});
    const fs::path dir = root / (param + "=" + v);
    const auto rows = RunAll(o, settings, dir);
    fs::create_directories(dir);
    const std::string csv = SummaryCsv(rows);
    WriteTextFile(dir / "summary.csv", csv);
    // Reuse the summary formatting, prefixing each data line.
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
      const auto nl = csv.find('\n', pos);
      sweep_csv += param + "," + v + "," + csv.substr(pos, nl - pos) + "\n";
      pos = nl + 1;
    }
    runs += rows.size();
  }
  fs::create_directories(root);
  WriteTextFile(root / "sweep_summary.csv", sweep_csv);
  std::cout << "wrote " << runs << " runs to " << root.string() << "\n";
  return 0;
}

int CmdValidate(const std::string& path) {
  SimConfig cfg;
  ApplySettings(cfg, LoadConfigFile(path));
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::cout << path << ": ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay-chain TCP congestion control simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "run scenarios and export traces");
  AddCommon(run, run_opts);

  CommonOptions sweep_opts;
  std::string param, values;
  CLI::App* sweep = app.add_subcommand("sweep", "run once per value of one config key");
  AddCommon(sweep, sweep_opts);
  sweep->add_option("--param", param, "config key to vary")->required();
  sweep->add_option("--values", values, "comma list of values")->required();

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "parse and check a config file");
  validate->add_option("--config", validate_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigErrorExit;
  }

  try {
    if (*run) return CmdRun(run_opts);
    if (*sweep) return CmdSweep(sweep_opts, param, values);
    if (*validate) return CmdValidate(validate_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeErrorExit;
  }
  return kRuntimeErrorExit;
}
