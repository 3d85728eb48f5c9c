#ifndef UBTCP_METRICS_H_
#define UBTCP_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ubtcp/simulator.h"
#include "ubtcp/units.h"

namespace ubtcp {

enum class ScenarioName {
  kEfficiency,
  kGoodputStatic,
  kGoodputMobile,
  kCwnd,
  kBandwidth,
};

// Result of one (scenario, controller, seed) run. Flow 0 is the measured
// flow; the others compete with it.
struct MetricsReport {
  ScenarioName scenario = ScenarioName::kEfficiency;
  ControllerKind controller = ControllerKind::kUb;
  std::uint64_t seed = 0;
  Seconds duration{0.0};
  double stability_band = 0.2;
  Rate bottleneck{0.0};
  SimulationResult sim;

  const FlowTrace& measured() const { return sim.flows.at(0); }
};

// Unique in-order payload bits delivered in (t0, t1] over (t1 - t0).
// Throws std::invalid_argument unless t0 < t1.
Rate Goodput(const FlowTrace& flow, Seconds t0, Seconds t1);
Rate Goodput(const MetricsReport& report, Seconds t0, Seconds t1);

// Cumulative acknowledged payload (megabits) at the end of each bucket:
// (bucket, acked), (2*bucket, acked), ... up to `until`. Throws
// std::invalid_argument for a nonpositive bucket.
std::vector<std::pair<Seconds, double>> EfficiencySeries(const FlowTrace& flow,
                                                         Seconds bucket,
                                                         Seconds until);
std::vector<std::pair<Seconds, double>> EfficiencySeries(
    const MetricsReport& report, Seconds bucket);

// Fraction of values within [(1-band)m, (1+band)m] of their median m.
// Throws std::invalid_argument with fewer than two values.
double StabilityIndex(std::span<const double> values, double band = 0.2);

// Same over the cwnd samples taken in [t0, t1].
double StabilityIndex(std::span<const TraceSample> trace, Seconds t0,
                      Seconds t1, double band = 0.2);

// Every bit the flow put on the air: data transmissions (retransmissions
// included) plus the receiver's ACKs.
Bits BandwidthConsumed(const FlowTrace& flow);

struct SummaryRow {
  std::string scenario;
  std::string controller;
  std::uint64_t seed = 0;
  double goodput_bps = 0.0;
  double efficiency_mbits_total = 0.0;
  double stability_index = 0.0;
  std::int64_t drops = 0;
  std::int64_t retransmits = 0;
  std::int64_t consumed_bits = 0;
};

// Summary of the measured flow. Stability covers the final two thirds of
// the run.
SummaryRow Summarize(const MetricsReport& report);

// Window over which the summary measures stability.
std::pair<Seconds, Seconds> StabilityWindow(Seconds duration);

}  // namespace ubtcp

#endif  // UBTCP_METRICS_H_
