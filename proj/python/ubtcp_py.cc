#include <map>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ubtcp/config.h"
#include "ubtcp/congestion_controller.h"
#include "ubtcp/metrics.h"
#include "ubtcp/scenario.h"

namespace py = pybind11;
using namespace ubtcp;

namespace {

std::string DecideName(double diff, double alpha, double gamma, double beta,
                       bool timeout) {
  ControllerConfig cfg;
  cfg.alpha = alpha;
  cfg.gamma = gamma;
  cfg.beta = beta;
  cfg.Validate();
  return std::string(ToString(Decide(diff, cfg, timeout)));
}

py::dict RunOne(const std::string& scenario, const std::string& controller,
                std::uint64_t seed, const std::map<std::string, std::string>& settings) {
  const ScenarioName name = ParseScenarioName(scenario);
  SimConfig cfg = ScenarioDefaults(name);
  for (const auto& [k, v] : settings) ApplySetting(cfg, k, v);
  cfg.seed = seed;
  ControllerKind kind;
  try {
    kind = ParseControllerKind(controller);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  MetricsReport report;
  {
    py::gil_scoped_release release;
    report = RunScenario(name, kind, cfg);
  }
  const SummaryRow row = Summarize(report);
  std::vector<double> t;
  std::vector<std::int64_t> cwnd;
  for (const TraceSample& s : report.measured().samples) {
    t.push_back(s.at.seconds());
    cwnd.push_back(s.cwnd.value());
  }
  py::dict d;
  d["scenario"] = row.scenario;
  d["controller"] = row.controller;
  d["seed"] = row.seed;
  d["goodput_bps"] = row.goodput_bps;
  d["efficiency_mbits_total"] = row.efficiency_mbits_total;
  d["stability_index"] = row.stability_index;
  d["drops"] = row.drops;
  d["retransmits"] = row.retransmits;
  d["consumed_bits"] = row.consumed_bits;
  d["time_s"] = t;
  d["cwnd"] = cwnd;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the ubtcp simulator and controller primitives";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("decide", &DecideName, py::arg("diff"), py::arg("alpha") = 1.0,
        py::arg("gamma") = 2.0, py::arg("beta") = 3.0, py::arg("timeout") = false);
  m.def(
      "vegas_diff",
      [](std::int64_t cwnd, double base_rtt, double rtt) {
        return VegasDiff(Segments(cwnd), Seconds(base_rtt), Seconds(rtt));
      },
      py::arg("cwnd"), py::arg("base_rtt"), py::arg("rtt"));
  m.def(
      "estimated_ssthresh",
      [](double bwe, double rtt, std::int64_t seg_size) {
        return EstimatedSsthresh(Rate(bwe), Seconds(rtt), Bytes(seg_size)).value();
      },
      py::arg("bwe"), py::arg("rtt"), py::arg("seg_size") = 1040);
  m.def(
      "stability_index",
      [](const std::vector<double>& values, double band) {
        return StabilityIndex(values, band);
      },
      py::arg("values"), py::arg("band") = 0.2);
  m.def("scenario_names", [] {
    std::vector<std::string> out;
    for (ScenarioName n : AllScenarios()) out.emplace_back(ToString(n));
    return out;
  });
  m.def("config_keys", &KnownConfigKeys);
  m.def("run_scenario", &RunOne, py::arg("scenario"), py::arg("controller") = "ub",
        py::arg("seed") = 42,
        py::arg("settings") = std::map<std::string, std::string>{});
}
