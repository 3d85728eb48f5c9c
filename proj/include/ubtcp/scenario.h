#ifndef UBTCP_SCENARIO_H_
#define UBTCP_SCENARIO_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "ubtcp/config.h"
#include "ubtcp/metrics.h"
#include "ubtcp/simulator.h"

namespace ubtcp {

std::string_view ToString(ScenarioName name);
// Throws ConfigError naming the bad scenario.
ScenarioName ParseScenarioName(std::string_view name);
std::vector<ScenarioName> AllScenarios();

// "ub" | "vegas" | "westwood" | "all" (or a comma list). Throws ConfigError.
std::vector<ControllerKind> ParseControllerList(std::string_view text);

// Baseline configuration of each scenario before config-file overrides.
//
//   efficiency      mobile relay chain, speeds uniform in [0, 35] m/s
//   goodput_static  same chain with motionless nodes
//   goodput_mobile  same as efficiency; sweep field.v_min/v_max for speeds
//   cwnd            congested: 16 CBR sources on the mobile chain
//   bandwidth       lossy: random per-hop loss on the mobile chain
SimConfig ScenarioDefaults(ScenarioName name);

struct ScenarioPlan {
  ScenarioName name = ScenarioName::kEfficiency;
  std::vector<ControllerKind> controllers{ControllerKind::kUb};
  std::vector<std::uint64_t> seeds{42};
  SimConfig config;  // config.seed is replaced by each entry of `seeds`

  void Validate() const;
};

// Controllers of every flow for a run whose measured flow uses `measured`.
std::vector<ControllerKind> FlowControllers(const SimConfig& cfg,
                                            ControllerKind measured);

// One run; the seed comes from cfg.seed. Throws ConfigError for an invalid
// configuration.
MetricsReport RunScenario(ScenarioName name, ControllerKind controller,
                          const SimConfig& cfg);

// Every (controller, seed) cell, ordered controller-major. `jobs` > 1 runs
// cells on worker threads; results do not depend on it.
std::vector<MetricsReport> RunMatrix(const ScenarioPlan& plan, int jobs = 1);

}  // namespace ubtcp

#endif  // UBTCP_SCENARIO_H_
