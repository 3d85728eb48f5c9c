#ifndef UBTCP_REPORT_EXPORT_H_
#define UBTCP_REPORT_EXPORT_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ubtcp/metrics.h"

namespace ubtcp {

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCwndTraceHeader =
    "time_us,flow_id,controller,cwnd_segments,ssthresh_segments,bwe_bps,"
    "diff_segments,action";
inline constexpr std::string_view kSummaryHeader =
    "scenario,controller,seed,goodput_bps,efficiency_mbits_total,"
    "stability_index,drops,retransmits,consumed_bits";
inline constexpr std::string_view kMobilityHeader = "time_s,node_id,x_m,y_m";
inline constexpr std::string_view kFlowTraceHeader =
    "time_us,flow_id,controller,acked_segments,delivered_segments,"
    "data_transmissions,retransmissions,in_flight";

struct CwndRow {
  std::int64_t time_us = 0;
  std::int32_t flow_id = 0;
  std::string controller;
  std::int64_t cwnd = 0;
  std::int64_t ssthresh = 0;
  double bwe_bps = 0.0;
  double diff = 0.0;
  std::string action;  // empty before the first decision

  bool operator==(const CwndRow&) const = default;
};

struct FlowRow {
  std::int64_t time_us = 0;
  std::int32_t flow_id = 0;
  std::string controller;
  std::int64_t acked = 0;
  std::int64_t delivered = 0;
  std::int64_t transmissions = 0;
  std::int64_t retransmissions = 0;
  std::int64_t in_flight = 0;

  bool operator==(const FlowRow&) const = default;
};

// Shortest text that parses back to the same double.
std::string FormatDouble(double v);

std::vector<CwndRow> CwndRows(const MetricsReport& report);
std::vector<FlowRow> FlowRows(const MetricsReport& report);

std::string CwndTraceCsv(const MetricsReport& report);
std::string FlowTraceCsv(const MetricsReport& report);
std::string MobilityCsv(const MetricsReport& report);
std::string SummaryCsv(const std::vector<SummaryRow>& rows);

// Parsers for the files above. Throw ExportError on malformed input.
std::vector<CwndRow> ParseCwndTraceCsv(std::string_view text);
std::vector<FlowRow> ParseFlowTraceCsv(std::string_view text);
std::vector<SummaryRow> ParseSummaryCsv(std::string_view text);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line chart: axes, ticks, one polyline per series.
std::string SvgChart(std::string_view title, std::string_view x_label,
                     std::string_view y_label, const std::vector<Series>& series);

// Writes cwnd_trace.csv, flow_trace.csv, mobility.csv, summary.csv and the
// cwnd/bwe/acked SVG charts into `dir` (created if missing). Throws
// ExportError naming the path on I/O failure.
void ExportRun(const MetricsReport& report, const std::filesystem::path& dir);

void WriteTextFile(const std::filesystem::path& path, std::string_view text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace ubtcp

#endif  // UBTCP_REPORT_EXPORT_H_
