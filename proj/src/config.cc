#include "ubtcp/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <type_traits>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ubtcp {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void Bad(std::string_view key, std::string_view value,
                      std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': bad value '" +
                    std::string(value) + "' (expected " + std::string(expected) +
                    ")");
}

double ParseDouble(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    Bad(key, value, "a number");
  }
  return out;
}

std::int64_t ParseInt(std::string_view key, std::string_view value) {
  std::int64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) Bad(key, value, "an integer");
  return out;
}

std::uint64_t ParseUint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) Bad(key, value, "a nonnegative integer");
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  Bad(key, value, "true or false");
}

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct KeyHandler {
  std::function<void(SimConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

using Table = std::map<std::string, KeyHandler, std::less<>>;

template <typename Field>
KeyHandler DoubleKey(Field field) {
  return {[field](SimConfig& c, std::string_view k, std::string_view v) {
            field(c) = ParseDouble(k, v);
          },
          [field](const SimConfig& c) {
            return Num(field(c));
          }};
}

template <typename Q, typename Field>
KeyHandler QuantityKey(Field field) {
  return {[field](SimConfig& c, std::string_view k, std::string_view v) {
            if constexpr (std::is_integral_v<typename Q::rep>) {
              field(c) = Q(ParseInt(k, v));
            } else {
              field(c) = Q(ParseDouble(k, v));
            }
          },
          [field](const SimConfig& c) {
            const auto value = field(c).value();
            if constexpr (std::is_integral_v<typename Q::rep>) {
              return std::to_string(value);
            } else {
              return Num(value);
            }
          }};
}

template <typename Field>
KeyHandler IntKey(Field field) {
  return {[field](SimConfig& c, std::string_view k, std::string_view v) {
            const std::int64_t n = ParseInt(k, v);
            if (n < std::numeric_limits<int>::min() ||
                n > std::numeric_limits<int>::max()) {
              Bad(k, v, "an int");
            }
            field(c) = static_cast<int>(n);
          },
          [field](const SimConfig& c) {
            return std::to_string(field(c));
          }};
}

template <typename Field>
KeyHandler BoolKey(Field field) {
  return {[field](SimConfig& c, std::string_view k, std::string_view v) {
            field(c) = ParseBool(k, v);
          },
          [field](const SimConfig& c) {
            return std::string(field(c) ? "true" : "false");
          }};
}

const Table& Keys() {
  static const Table table = [] {
    Table t;
    t["sim.duration_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.duration; });
    t["sim.seed"] = {[](SimConfig& c, std::string_view k, std::string_view v) {
                       c.seed = ParseUint(k, v);
                     },
                     [](const SimConfig& c) { return std::to_string(c.seed); }};
    t["sim.sample_interval_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.sample_interval; });
    t["sim.symmetric_ack_path"] = BoolKey([](auto& c) -> auto& { return c.symmetric_ack_path; });

    t["controller.alpha"] = DoubleKey([](auto& c) -> auto& { return c.controller.alpha; });
    t["controller.gamma"] = DoubleKey([](auto& c) -> auto& { return c.controller.gamma; });
    t["controller.beta"] = DoubleKey([](auto& c) -> auto& { return c.controller.beta; });
    t["controller.seg_size"] = QuantityKey<Bytes>([](auto& c) -> auto& { return c.controller.seg_size; });
    t["controller.initial_cwnd"] = QuantityKey<Segments>([](auto& c) -> auto& { return c.controller.initial_cwnd; });
    t["controller.initial_ssthresh"] = QuantityKey<Segments>([](auto& c) -> auto& { return c.controller.initial_ssthresh; });
    t["controller.ewma_gain"] = DoubleKey([](auto& c) -> auto& { return c.controller.ewma_gain; });

    t["packet.header_bytes"] = QuantityKey<Bytes>([](auto& c) -> auto& { return c.header_size; });
    t["packet.ack_bytes"] = QuantityKey<Bytes>([](auto& c) -> auto& { return c.ack_size; });

    t["link.hops"] = IntKey([](auto& c) -> auto& { return c.hops; });
    t["link.bandwidth_bps"] = QuantityKey<Rate>([](auto& c) -> auto& { return c.link.bandwidth; });
    t["link.prop_delay_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.link.prop_delay; });
    t["link.queue_packets"] = IntKey([](auto& c) -> auto& { return c.link.queue_capacity; });
    t["link.loss_rate"] = DoubleKey([](auto& c) -> auto& { return c.link.loss_rate; });

    t["rtt.rto_min_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.rtt.rto_min; });
    t["rtt.rto_max_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.rtt.rto_max; });
    t["rtt.rto_initial_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.rtt.rto_initial; });

    t["field.width"] = QuantityKey<Meters>([](auto& c) -> auto& { return c.mobility.field.width; });
    t["field.height"] = QuantityKey<Meters>([](auto& c) -> auto& { return c.mobility.field.height; });
    t["field.range"] = QuantityKey<Meters>([](auto& c) -> auto& { return c.mobility.field.range; });
    t["field.v_min"] = QuantityKey<MetersPerSecond>([](auto& c) -> auto& { return c.mobility.field.v_min; });
    t["field.v_max"] = QuantityKey<MetersPerSecond>([](auto& c) -> auto& { return c.mobility.field.v_max; });
    t["field.v_floor"] = QuantityKey<MetersPerSecond>([](auto& c) -> auto& { return c.mobility.field.v_floor; });
    t["field.pause_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.mobility.field.pause; });
    t["field.random_pause"] = BoolKey([](auto& c) -> auto& { return c.mobility.field.random_pause; });

    t["mobility.enabled"] = BoolKey([](auto& c) -> auto& { return c.mobility.enabled; });
    t["mobility.outage_dt_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.mobility.outage_dt; });
    t["mobility.trace_interval_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.mobility.trace_interval; });

    t["cbr.sources"] = IntKey([](auto& c) -> auto& { return c.cbr.sources; });
    t["cbr.rate_pps"] = DoubleKey([](auto& c) -> auto& { return c.cbr.rate_pps; });

    t["flow.count"] = IntKey([](auto& c) -> auto& { return c.flows; });
    t["flow.stagger_s"] = QuantityKey<Seconds>([](auto& c) -> auto& { return c.flow_stagger; });
    t["flow.competitor"] = {
        [](SimConfig& c, std::string_view k, std::string_view v) {
          if (v == "same") {
            c.competitor.reset();
            return;
          }
          try {
            c.competitor = ParseControllerKind(v);
          } catch (const std::invalid_argument&) {
            Bad(k, v, "same, ub, vegas or westwood");
          }
        },
        [](const SimConfig& c) {
          return c.competitor ? std::string(ToString(*c.competitor))
                              : std::string("same");
        }};

    t["metrics.stability_band"] = DoubleKey([](auto& c) -> auto& { return c.stability_band; });
    return t;
  }();
  return table;
}

}  // namespace

std::vector<Setting> ParseConfigText(std::string_view text) {
  std::vector<Setting> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    out.push_back(Setting{std::string(key), std::string(value), line_no});
  }
  return out;
}

std::vector<Setting> LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfigText(ss.str());
}

void ApplySetting(SimConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = Keys();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  it->second.set(cfg, key, value);
}

void ApplySettings(SimConfig& cfg, const std::vector<Setting>& settings) {
  for (const Setting& s : settings) ApplySetting(cfg, s.key, s.value);
}

std::vector<std::string> KnownConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : Keys()) keys.push_back(k);
  return keys;
}

std::string GetSetting(const SimConfig& cfg, std::string_view key) {
  const auto& table = Keys();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  return it->second.get(cfg);
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = Trim(text.substr(
        pos, comma == std::string_view::npos ? text.size() - pos : comma - pos));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace ubtcp
