#include "ubtcp/scenario.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace ubtcp {

namespace {

constexpr ScenarioName kAll[] = {
    ScenarioName::kEfficiency, ScenarioName::kGoodputStatic,
    ScenarioName::kGoodputMobile, ScenarioName::kCwnd, ScenarioName::kBandwidth};

// Shared base: two flows on a three-hop mobile relay chain with one 8 pps
// CBR source.
SimConfig BaseConfig() {
  SimConfig cfg;
  cfg.mobility.enabled = true;
  cfg.mobility.field.width = Meters(300.0);
  cfg.mobility.field.height = Meters(300.0);
  cfg.mobility.field.range = Meters(250.0);
  cfg.mobility.field.v_min = MetersPerSecond(0.0);
  cfg.mobility.field.v_max = MetersPerSecond(35.0);
  return cfg;
}

}  // namespace

std::string_view ToString(ScenarioName name) {
  switch (name) {
    case ScenarioName::kEfficiency:
      return "efficiency";
    case ScenarioName::kGoodputStatic:
      return "goodput_static";
    case ScenarioName::kGoodputMobile:
      return "goodput_mobile";
    case ScenarioName::kCwnd:
      return "cwnd";
    case ScenarioName::kBandwidth:
      return "bandwidth";
  }
  return "?";
}

ScenarioName ParseScenarioName(std::string_view name) {
  for (ScenarioName s : kAll) {
    if (ToString(s) == name) return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected efficiency, goodput_static, goodput_mobile, "
                    "cwnd or bandwidth)");
}

std::vector<ScenarioName> AllScenarios() {
  return {std::begin(kAll), std::end(kAll)};
}

std::vector<ControllerKind> ParseControllerList(std::string_view text) {
  std::vector<ControllerKind> out;
  for (const std::string& item : SplitList(text)) {
    if (item == "all") {
      for (ControllerKind k :
           {ControllerKind::kUb, ControllerKind::kVegas, ControllerKind::kWestwood}) {
        out.push_back(k);
      }
      continue;
    }
    try {
      out.push_back(ParseControllerKind(item));
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown controller '" + item +
                        "' (expected ub, vegas, westwood or all)");
    }
  }
  if (out.empty()) throw ConfigError("no controller given");
  return out;
}

SimConfig ScenarioDefaults(ScenarioName name) {
  SimConfig cfg = BaseConfig();
  switch (name) {
    case ScenarioName::kEfficiency:
    case ScenarioName::kGoodputMobile:
      break;
    case ScenarioName::kGoodputStatic:
      cfg.mobility.field.v_min = MetersPerSecond(0.0);
      cfg.mobility.field.v_max = MetersPerSecond(0.0);
      break;
    case ScenarioName::kCwnd:
      cfg.cbr.sources = 16;  // about half the bottleneck
      break;
    case ScenarioName::kBandwidth:
      cfg.link.loss_rate = 0.01;
      break;
  }
  return cfg;
}

void ScenarioPlan::Validate() const {
  if (controllers.empty()) throw ConfigError("scenario needs at least one controller");
  if (seeds.empty()) throw ConfigError("scenario needs at least one seed");
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<ControllerKind> FlowControllers(const SimConfig& cfg,
                                            ControllerKind measured) {
  std::vector<ControllerKind> kinds(static_cast<std::size_t>(cfg.flows),
                                    cfg.competitor.value_or(measured));
  kinds.at(0) = measured;
  return kinds;
}

MetricsReport RunScenario(ScenarioName name, ControllerKind controller,
                          const SimConfig& cfg) {
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Simulator sim(cfg, FlowControllers(cfg, controller));
  MetricsReport report;
  report.scenario = name;
  report.controller = controller;
  report.seed = cfg.seed;
  report.duration = cfg.duration;
  report.stability_band = cfg.stability_band;
  report.bottleneck = cfg.link.bandwidth;
  report.sim = sim.Run();
  return report;
}

std::vector<MetricsReport> RunMatrix(const ScenarioPlan& plan, int jobs) {
  plan.Validate();
  struct Cell {
    ControllerKind controller;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (ControllerKind c : plan.controllers) {
    for (std::uint64_t s : plan.seeds) cells.push_back({c, s});
  }
  std::vector<MetricsReport> reports(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        SimConfig cfg = plan.config;
        cfg.seed = cells[i].seed;
        reports[i] = RunScenario(plan.name, cells[i].controller, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(
      std::clamp<int>(jobs, 1, static_cast<int>(std::max<std::size_t>(cells.size(), 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

}  // namespace ubtcp
