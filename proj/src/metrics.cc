#include "ubtcp/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ubtcp/scenario.h"

namespace ubtcp {

namespace {

// Value of a step timeline at time t (0 before the first point).
std::int64_t ValueAt(const std::vector<TimelinePoint>& timeline, SimTime t) {
  auto it = std::upper_bound(
      timeline.begin(), timeline.end(), t,
      [](SimTime value, const TimelinePoint& p) { return value < p.at; });
  if (it == timeline.begin()) return 0;
  return std::prev(it)->value;
}

double PayloadBits(const FlowTrace& flow) {
  return static_cast<double>(BitsOf(flow.payload_size).value());
}

}  // namespace

Rate Goodput(const FlowTrace& flow, Seconds t0, Seconds t1) {
  if (!(t0 < t1)) throw std::invalid_argument("Goodput: need t0 < t1");
  const std::int64_t delivered =
      ValueAt(flow.delivery_timeline, SimTime::FromSeconds(t1.value())) -
      ValueAt(flow.delivery_timeline, SimTime::FromSeconds(t0.value()));
  return RateOf(static_cast<double>(delivered) * PayloadBits(flow), t1 - t0);
}

Rate Goodput(const MetricsReport& report, Seconds t0, Seconds t1) {
  return Goodput(report.measured(), t0, t1);
}

std::vector<std::pair<Seconds, double>> EfficiencySeries(const FlowTrace& flow,
                                                         Seconds bucket,
                                                         Seconds until) {
  if (!(bucket.value() > 0.0)) {
    throw std::invalid_argument("EfficiencySeries: bucket must be > 0");
  }
  std::vector<std::pair<Seconds, double>> out;
  const auto buckets =
      static_cast<std::int64_t>(std::floor(until.value() / bucket.value() + 1e-9));
  for (std::int64_t k = 1; k <= buckets; ++k) {
    const Seconds t = bucket * static_cast<double>(k);
    const std::int64_t acked =
        ValueAt(flow.ack_timeline, SimTime::FromSeconds(t.value()));
    out.emplace_back(t, static_cast<double>(acked) * PayloadBits(flow) / 1e6);
  }
  return out;
}

std::vector<std::pair<Seconds, double>> EfficiencySeries(
    const MetricsReport& report, Seconds bucket) {
  return EfficiencySeries(report.measured(), bucket, report.duration);
}

double StabilityIndex(std::span<const double> values, double band) {
  if (values.size() < 2) {
    throw std::invalid_argument("StabilityIndex: need at least two samples");
  }
  if (!(band >= 0.0)) throw std::invalid_argument("StabilityIndex: band must be >= 0");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median =
      n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const double lo = (1.0 - band) * median;
  const double hi = (1.0 + band) * median;
  const auto inside = std::count_if(values.begin(), values.end(),
                                    [&](double v) { return v >= lo && v <= hi; });
  return static_cast<double>(inside) / static_cast<double>(n);
}

double StabilityIndex(std::span<const TraceSample> trace, Seconds t0,
                      Seconds t1, double band) {
  const SimTime from = SimTime::FromSeconds(t0.value());
  const SimTime to = SimTime::FromSeconds(t1.value());
  std::vector<double> cwnd;
  for (const TraceSample& s : trace) {
    if (s.at >= from && s.at <= to) {
      cwnd.push_back(static_cast<double>(s.cwnd.value()));
    }
  }
  return StabilityIndex(cwnd, band);
}

Bits BandwidthConsumed(const FlowTrace& flow) {
  return BitsOf(flow.seg_size) * flow.counters.data_transmissions +
         BitsOf(flow.ack_size) * flow.counters.acks_sent;
}

std::pair<Seconds, Seconds> StabilityWindow(Seconds duration) {
  return {duration * (1.0 / 3.0), duration};
}

SummaryRow Summarize(const MetricsReport& report) {
  const FlowTrace& flow = report.measured();
  SummaryRow row;
  row.scenario = std::string(ToString(report.scenario));
  row.controller = std::string(ToString(report.controller));
  row.seed = report.seed;
  row.goodput_bps = Goodput(flow, Seconds(0.0), report.duration).value();
  row.efficiency_mbits_total =
      static_cast<double>(flow.ack_timeline.empty() ? 0
                                                    : flow.ack_timeline.back().value) *
      PayloadBits(flow) / 1e6;
  const auto [t0, t1] = StabilityWindow(report.duration);
  row.stability_index = StabilityIndex(flow.samples, t0, t1, report.stability_band);
  row.drops = flow.counters.data_drops;
  row.retransmits = flow.counters.retransmissions;
  row.consumed_bits = BandwidthConsumed(flow).value();
  return row;
}

}  // namespace ubtcp
