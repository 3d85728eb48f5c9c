#include "ubtcp/report_export.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ubtcp/scenario.h"

namespace ubtcp {

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

// Data lines of a CSV after checking its header.
std::vector<std::vector<std::string_view>> Records(std::string_view text,
                                                   std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t pos = 0;
  bool first = true;
  const std::size_t columns = SplitFields(header).size();
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (first) {
      if (line != header) {
        throw ExportError("unexpected CSV header '" + std::string(line) + "'");
      }
      first = false;
      continue;
    }
    if (line.empty()) continue;
    auto fields = SplitFields(line);
    if (fields.size() != columns) {
      throw ExportError("CSV row has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(columns));
    }
    rows.push_back(std::move(fields));
  }
  if (first) throw ExportError("empty CSV");
  return rows;
}

template <typename T>
T ParseNumber(std::string_view s) {
  T out{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ExportError("bad number '" + std::string(s) + "' in CSV");
  }
  return out;
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick step: 1, 2 or 5 times a power of ten.
double TickStep(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, ptr);
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<CwndRow> CwndRows(const MetricsReport& report) {
  std::vector<CwndRow> rows;
  for (const FlowTrace& flow : report.sim.flows) {
    const std::string controller(ToString(flow.controller));
    for (const TraceSample& s : flow.samples) {
      rows.push_back(CwndRow{
          s.at.micros(), flow.flow_id, controller, s.cwnd.value(),
          s.ssthresh.value(), s.bwe.value(), s.diff,
          s.action ? std::string(ToString(*s.action)) : std::string()});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CwndRow& a, const CwndRow& b) {
    return a.time_us < b.time_us;
  });
  return rows;
}

std::vector<FlowRow> FlowRows(const MetricsReport& report) {
  std::vector<FlowRow> rows;
  for (const FlowTrace& flow : report.sim.flows) {
    const std::string controller(ToString(flow.controller));
    for (const TraceSample& s : flow.samples) {
      rows.push_back(FlowRow{s.at.micros(), flow.flow_id, controller,
                             s.acked_segments, s.delivered_segments,
                             s.data_transmissions, s.retransmissions, s.in_flight});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const FlowRow& a, const FlowRow& b) {
    return a.time_us < b.time_us;
  });
  return rows;
}

std::string CwndTraceCsv(const MetricsReport& report) {
  std::string out(kCwndTraceHeader);
  out += '\n';
  for (const CwndRow& r : CwndRows(report)) {
    out += std::to_string(r.time_us) + ',' + std::to_string(r.flow_id) + ',' +
           r.controller + ',' + std::to_string(r.cwnd) + ',' +
           std::to_string(r.ssthresh) + ',' + FormatDouble(r.bwe_bps) + ',' +
           FormatDouble(r.diff) + ',' + r.action + '\n';
  }
  return out;
}

std::string FlowTraceCsv(const MetricsReport& report) {
  std::string out(kFlowTraceHeader);
  out += '\n';
  for (const FlowRow& r : FlowRows(report)) {
    out += std::to_string(r.time_us) + ',' + std::to_string(r.flow_id) + ',' +
           r.controller + ',' + std::to_string(r.acked) + ',' +
           std::to_string(r.delivered) + ',' + std::to_string(r.transmissions) +
           ',' + std::to_string(r.retransmissions) + ',' +
           std::to_string(r.in_flight) + '\n';
  }
  return out;
}

std::string MobilityCsv(const MetricsReport& report) {
  std::string out(kMobilityHeader);
  out += '\n';
  for (const MobilitySample& m : report.sim.mobility) {
    out += FormatDouble(m.at.seconds()) + ',' + std::to_string(m.node) + ',' +
           FormatDouble(m.position.x_m) + ',' + FormatDouble(m.position.y_m) + '\n';
  }
  return out;
}

std::string SummaryCsv(const std::vector<SummaryRow>& rows) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const SummaryRow& r : rows) {
    out += r.scenario + ',' + r.controller + ',' + std::to_string(r.seed) + ',' +
           FormatDouble(r.goodput_bps) + ',' + FormatDouble(r.efficiency_mbits_total) +
           ',' + FormatDouble(r.stability_index) + ',' + std::to_string(r.drops) +
           ',' + std::to_string(r.retransmits) + ',' +
           std::to_string(r.consumed_bits) + '\n';
  }
  return out;
}

std::vector<CwndRow> ParseCwndTraceCsv(std::string_view text) {
  std::vector<CwndRow> rows;
  for (const auto& f : Records(text, kCwndTraceHeader)) {
    rows.push_back(CwndRow{ParseNumber<std::int64_t>(f[0]),
                           ParseNumber<std::int32_t>(f[1]), std::string(f[2]),
                           ParseNumber<std::int64_t>(f[3]),
                           ParseNumber<std::int64_t>(f[4]), ParseNumber<double>(f[5]),
                           ParseNumber<double>(f[6]), std::string(f[7])});
  }
  return rows;
}

std::vector<FlowRow> ParseFlowTraceCsv(std::string_view text) {
  std::vector<FlowRow> rows;
  for (const auto& f : Records(text, kFlowTraceHeader)) {
    rows.push_back(FlowRow{
        ParseNumber<std::int64_t>(f[0]), ParseNumber<std::int32_t>(f[1]),
        std::string(f[2]), ParseNumber<std::int64_t>(f[3]),
        ParseNumber<std::int64_t>(f[4]), ParseNumber<std::int64_t>(f[5]),
        ParseNumber<std::int64_t>(f[6]), ParseNumber<std::int64_t>(f[7])});
  }
  return rows;
}

std::vector<SummaryRow> ParseSummaryCsv(std::string_view text) {
  std::vector<SummaryRow> rows;
  for (const auto& f : Records(text, kSummaryHeader)) {
    SummaryRow r;
    r.scenario = std::string(f[0]);
    r.controller = std::string(f[1]);
    r.seed = ParseNumber<std::uint64_t>(f[2]);
    r.goodput_bps = ParseNumber<double>(f[3]);
    r.efficiency_mbits_total = ParseNumber<double>(f[4]);
    r.stability_index = ParseNumber<double>(f[5]);
    r.drops = ParseNumber<std::int64_t>(f[6]);
    r.retransmits = ParseNumber<std::int64_t>(f[7]);
    r.consumed_bits = ParseNumber<std::int64_t>(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string SvgChart(std::string_view title, std::string_view x_label,
                     std::string_view y_label, const std::vector<Series>& series) {
  constexpr double kW = 800, kH = 400;
  constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                     "#ff7f0e", "#9467bd", "#8c564b"};

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x0 = x1 = x;
        y1 = y;
        any = true;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
    << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">"
    << XmlEscape(title) << "</text>\n";
  o << "<g stroke=\"black\" stroke-width=\"1\">"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
    << "\" y2=\"" << kTop + ph << "\"/>"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
    << "\" y2=\"" << kTop + ph << "\"/></g>\n";

  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const double xs = TickStep(x1 - x0);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    o << "<line x1=\"" << Fixed(sx(t)) << "\" y1=\"" << kTop + ph << "\" x2=\""
      << Fixed(sx(t)) << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>"
      << "<text x=\"" << Fixed(sx(t)) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << FormatDouble(t) << "</text>\n";
  }
  const double ys = TickStep(y1 - y0);
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << Fixed(sy(t)) << "\" x2=\""
      << kLeft << "\" y2=\"" << Fixed(sy(t)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << kLeft - 8 << "\" y=\"" << Fixed(sy(t) + 4)
      << "\" text-anchor=\"end\">" << FormatDouble(t) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10
    << "\" text-anchor=\"middle\">" << XmlEscape(x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << kTop + ph / 2
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + ph / 2
    << ")\">" << XmlEscape(y_label) << "</text>\n";
  o << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      o << Fixed(sx(x)) << ',' << Fixed(sy(y)) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(i);
    o << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
      << kLeft + pw + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/><text x=\"" << kLeft + pw + 35 << "\" y=\""
      << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << XmlEscape(series[i].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExportError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw ExportError("failed writing '" + path.string() + "'");
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExportError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ExportRun(const MetricsReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ExportError("cannot create '" + dir.string() + "': " + ec.message());

  WriteTextFile(dir / "cwnd_trace.csv", CwndTraceCsv(report));
  WriteTextFile(dir / "flow_trace.csv", FlowTraceCsv(report));
  WriteTextFile(dir / "mobility.csv", MobilityCsv(report));
  WriteTextFile(dir / "summary.csv", SummaryCsv({Summarize(report)}));

  std::vector<Series> cwnd, bwe, acked;
  for (const FlowTrace& flow : report.sim.flows) {
    const std::string label =
        "flow " + std::to_string(flow.flow_id) + " " + std::string(ToString(flow.controller));
    Series c{label, {}}, b{label, {}};
    for (const TraceSample& s : flow.samples) {
      c.points.emplace_back(s.at.seconds(), static_cast<double>(s.cwnd.value()));
      b.points.emplace_back(s.at.seconds(), s.bwe.value() / 1e6);
    }
    Series a{label, {}};
    for (const auto& [t, mbits] : EfficiencySeries(flow, Seconds(1.0), report.duration)) {
      a.points.emplace_back(t.value(), mbits);
    }
    cwnd.push_back(std::move(c));
    bwe.push_back(std::move(b));
    acked.push_back(std::move(a));
  }
  WriteTextFile(dir / "cwnd.svg", SvgChart("Congestion window", "time (s)",
                                           "cwnd (segments)", cwnd));
  WriteTextFile(dir / "bwe.svg",
                SvgChart("Bandwidth estimate", "time (s)", "BWE (Mbit/s)", bwe));
  WriteTextFile(dir / "acked.svg", SvgChart("Acknowledged payload", "time (s)",
                                            "acked (Mbit)", acked));
}

}  // namespace ubtcp
