// Acceptance checks. One PASS/FAIL line per criterion; exit status 0 when
// every selected criterion passes, 1 when any fails, 2 on a harness error.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ubtcp/congestion_controller.h"
#include "ubtcp/link.h"
#include "ubtcp/metrics.h"
#include "ubtcp/mobility.h"
#include "ubtcp/report_export.h"
#include "ubtcp/scenario.h"
#include "ubtcp/tcp_flow.h"

namespace fs = std::filesystem;
using namespace ubtcp;

namespace {

// Pinned tolerances.
constexpr double kDecideBudgetS = 1.0;
constexpr double kEwmaRelTol = 0.01;
constexpr double kRunBudgetS = 10.0;
constexpr int kFuzzSequences = 10000;
constexpr int kFuzzSteps = 200;
constexpr int kMobilityProbes = 100000;
constexpr double kOnsetTolS = 0.1;
constexpr int kSeeds = 20;
constexpr int kMajority = 15;
constexpr double kGoodputMatch = 0.10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::string cli;
  fs::path workdir;
  int jobs = 1;
};

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::vector<std::uint64_t> SeedRange() {
  std::vector<std::uint64_t> s(kSeeds);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

int Shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- 1

ControllerAction TruthTable(int quarters, bool timeout) {
  // alpha = 1, gamma = 2, beta = 3 in quarter-segment units: 4, 8, 12.
  if (quarters < 4) return ControllerAction::kIncrease;
  if (quarters < 8) return timeout ? ControllerAction::kReset : ControllerAction::kHold;
  if (quarters <= 12) return ControllerAction::kRecalibrate;
  return timeout ? ControllerAction::kReset : ControllerAction::kDecrease;
}

Outcome DecisionTable(const Context&) {
  const auto t0 = Clock::now();
  ControllerConfig cfg;
  cfg.alpha = 1;
  cfg.gamma = 2;
  cfg.beta = 3;
  int cells = 0, match = 0;
  for (int q = 0; q <= 24; ++q) {
    for (bool timeout : {false, true}) {
      ++cells;
      match += Decide(q / 4.0, cfg, timeout) == TruthTable(q, timeout) ? 1 : 0;
    }
  }
  const double dt = SecondsSince(t0);
  return {match == cells && dt < kDecideBudgetS,
          Fmt("%d/%d cells match, %.4f s", match, cells, dt)};
}

// ---- 2

Outcome ArithmeticAnchors(const Context&) {
  const ControllerConfig cfg;
  const CcState s = Apply(CcState{Segments(15), Segments(32)},
                          ControllerAction::kRecalibrate, Rate(832000),
                          Seconds(0.1), cfg);
  UbController ub(cfg);
  ub.OnTimeout(RttTracker{}, BandwidthEstimator{});
  const bool ok = s.ssthresh.value() == 10 && ub.state().cwnd.value() == 1 &&
                  ub.state().ssthresh.value() == 2;
  return {ok, Fmt("recalibrate ssthresh=%lld; timeout with bwe=0 -> (%lld, %lld)",
                  static_cast<long long>(s.ssthresh.value()),
                  static_cast<long long>(ub.state().cwnd.value()),
                  static_cast<long long>(ub.state().ssthresh.value()))};
}

// ---- 3

Outcome EwmaConvergence(const Context&) {
  EwmaRateFilter f(0.9);
  for (int i = 0; i < 200; ++i) {
    f.AddSample(8320.0, SimTime(static_cast<std::int64_t>(i) * 10000));
  }
  const double rel = std::abs(f.rate().value() - 832000.0) / 832000.0;
  return {rel < kEwmaRelTol, Fmt("bwe=%.3f bps, rel err %.2e", f.rate().value(), rel)};
}

// ---- 4

bool SameTree(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<fs::path> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) fa.insert(fs::relative(e.path(), a));
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) fb.insert(fs::relative(e.path(), b));
  }
  if (fa != fb) {
    why = "file sets differ";
    return false;
  }
  for (const fs::path& rel : fa) {
    if (ReadTextFile(a / rel) != ReadTextFile(b / rel)) {
      why = rel.string() + " differs";
      return false;
    }
  }
  why = std::to_string(fa.size()) + " files identical";
  return !fa.empty();
}

Outcome Determinism(const Context& ctx) {
  const fs::path a = ctx.workdir / "det_a";
  const fs::path b = ctx.workdir / "det_b";
  double worst = 0;
  for (const fs::path& dir : {a, b}) {
    fs::remove_all(dir);
    const auto t0 = Clock::now();
    const int rc = Shell(ctx.cli + " run --scenario cwnd --controller all --seed 7 --out " +
                         dir.string() + " >/dev/null 2>&1");
    worst = std::max(worst, SecondsSince(t0));
    if (rc != 0) return {false, Fmt("cli exited with %d", rc)};
  }
  std::string why;
  const bool same = SameTree(a, b, why);
  return {same && worst < kRunBudgetS,
          Fmt("%s; slowest execution %.2f s (3 controllers x 140 s)", why.c_str(), worst)};
}

// ---- 5

// Random network between one sender and one receiver: packets may be
// delivered in any order, dropped, or held; timers fire at their deadline.
struct FuzzNet : FlowHost {
  std::vector<Packet> data, acks;
  std::vector<std::pair<SimTime, std::uint64_t>> timers;
  void Transmit(const Packet& p, SimTime) override { data.push_back(p); }
  void ScheduleRto(std::int32_t, SimTime at, std::uint64_t gen) override {
    timers.emplace_back(at, gen);
  }
};

template <typename T>
T TakeRandom(std::vector<T>& v, Rng& rng) {
  const auto i = static_cast<std::size_t>(rng.Uniform(0, static_cast<double>(v.size())));
  T x = v[std::min(i, v.size() - 1)];
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(std::min(i, v.size() - 1)));
  return x;
}

Outcome SafetyFuzz(const Context&) {
  Rng rng(20240601);
  std::int64_t steps = 0, violations = 0, sends = 0;
  std::string first;
  auto note = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  for (int seq = 0; seq < kFuzzSequences; ++seq) {
    const auto kind = static_cast<ControllerKind>(static_cast<int>(rng.Uniform(0, 3)));
    ControllerConfig cc;
    cc.initial_cwnd = Segments(1 + static_cast<std::int64_t>(rng.Uniform(0, 40)));
    cc.initial_ssthresh = Segments(2 + static_cast<std::int64_t>(rng.Uniform(0, 60)));
    cc.ewma_gain = rng.Uniform(0, 0.99);
    FuzzNet net;
    TcpSender tx(SenderConfig{}, MakeController(kind, cc), net);
    TcpReceiver rx(0);
    // Per-sequence link character: how lossy and how fast.
    const double loss = rng.Uniform(0, 0.5);
    const double pace = rng.Uniform(1e-4, 0.05);
    SimTime now;
    tx.TrySend(now);
    for (int k = 0; k < kFuzzSteps; ++k, ++steps) {
      now = now + ToMicros(Seconds(rng.Uniform(0, pace)));
      const double u = rng.Uniform(0, 1);
      if (u < 0.45 && !net.data.empty()) {
        const Packet p = TakeRandom(net.data, rng);
        if (!rng.Bernoulli(loss)) net.acks.push_back(rx.OnData(p, now));
      } else if (u < 0.9 && !net.acks.empty()) {
        const Packet a = TakeRandom(net.acks, rng);
        if (!rng.Bernoulli(loss)) tx.OnAck(a, now);
      } else if (!net.timers.empty()) {
        const auto [at, gen] = net.timers.back();
        net.timers.pop_back();
        if (at > now) now = at;
        tx.OnRtoFired(gen, now);
      }
      const CcState& s = tx.controller().state();
      if (s.cwnd.value() < 1) note("cwnd < 1");
      if (s.ssthresh.value() < 2) note("ssthresh < 2");
    }
    sends += tx.counters().data_transmissions;
    if (tx.counters().window_violations != 0) note("send beyond cwnd");
  }

  // Drop-tail queue under random bursts, drains and outages.
  std::size_t max_queue = 0;
  for (int seq = 0; seq < kFuzzSequences; ++seq) {
    EventLoop loop;
    Link link(0, LinkConfig{}, Rng::ForStream(seq, 1));
    for (int k = 0; k < 50; ++k) {
      const double u = rng.Uniform(0, 1);
      if (u < 0.5) {
        const int burst = static_cast<int>(rng.Uniform(0, 60));
        for (int i = 0; i < burst; ++i) {
          Packet p;
          p.size = Bytes(1040);
          link.Enqueue(p, loop.now(), loop);
        }
      } else if (u < 0.9) {
        const SimTime until = loop.now() + ToMicros(Seconds(rng.Uniform(0, 0.2)));
        loop.RunUntil(until, [&](const Event& ev) {
          if (ev.kind == EventKind::kTxComplete) link.OnTxComplete(ev.tag, loop.now(), loop);
        });
      } else {
        link.SetUp(!link.up(), loop.now(), loop);
      }
      max_queue = std::max(max_queue, link.queue_length());
    }
  }
  if (max_queue > 80) note("queue above 80");

  return {violations == 0,
          Fmt("%d transport sequences, %lld steps, %lld sends; %d queue sequences, "
              "max queue %zu; violations %lld%s%s",
              kFuzzSequences, static_cast<long long>(steps), static_cast<long long>(sends),
              kFuzzSequences, max_queue, static_cast<long long>(violations),
              violations ? ", first: " : "", first.c_str())};
}

// ---- 6

Outcome Conservation(const Context& ctx) {
  const fs::path out = ctx.workdir / "conservation";
  fs::remove_all(out);
  const int rc = Shell(ctx.cli + " run --scenario all --controller all --seed 1,2,3 --jobs " +
                       std::to_string(ctx.jobs) + " --out " + out.string() +
                       " >/dev/null 2>&1");
  if (rc != 0) return {false, Fmt("cli exited with %d", rc)};
  int traces = 0;
  std::int64_t rows = 0;
  std::string bad;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.path().filename() != "flow_trace.csv") continue;
    ++traces;
    std::map<std::int32_t, FlowRow> last;
    for (const FlowRow& r : ParseFlowTraceCsv(ReadTextFile(e.path()))) {
      ++rows;
      if (r.delivered > r.transmissions - r.retransmissions) bad = "delivered > sent";
      if (r.acked > r.delivered) bad = "acked > delivered";
      if (auto it = last.find(r.flow_id); it != last.end()) {
        if (r.acked < it->second.acked) bad = "cumulative ACK decreased";
        if (r.delivered < it->second.delivered) bad = "delivery decreased";
        if (r.time_us < it->second.time_us) bad = "time went backwards";
      }
      last[r.flow_id] = r;
    }
    if (!bad.empty()) {
      bad += " in " + fs::relative(e.path(), out).string();
      break;
    }
  }
  const int expected = 5 * 3 * 3;
  return {bad.empty() && traces == expected,
          Fmt("%d/%d traces, %lld rows checked%s%s", traces, expected,
              static_cast<long long>(rows), bad.empty() ? "" : "; ", bad.c_str())};
}

// ---- 7, 8, 9

// summary rows keyed by (controller, seed)
using Table = std::map<std::pair<ControllerKind, std::uint64_t>, SummaryRow>;

Table RunTable(ScenarioName name, const SimConfig& cfg,
               std::vector<ControllerKind> controllers, int jobs) {
  ScenarioPlan plan;
  plan.name = name;
  plan.controllers = std::move(controllers);
  plan.seeds = SeedRange();
  plan.config = cfg;
  Table t;
  for (const MetricsReport& r : RunMatrix(plan, jobs)) {
    t[{r.controller, r.seed}] = Summarize(r);
  }
  return t;
}

constexpr ControllerKind kUb = ControllerKind::kUb;
constexpr ControllerKind kVegas = ControllerKind::kVegas;
constexpr ControllerKind kWestwood = ControllerKind::kWestwood;

double Mean(const Table& t, ControllerKind c, double SummaryRow::*field) {
  double sum = 0;
  for (std::uint64_t s : SeedRange()) sum += t.at({c, s}).*field;
  return sum / kSeeds;
}

Outcome CongestedStability(const Context& ctx) {
  const Table t = RunTable(ScenarioName::kCwnd, ScenarioDefaults(ScenarioName::kCwnd),
                           {kUb, kVegas, kWestwood}, ctx.jobs);
  int wins = 0, vs_vegas = 0, vs_westwood = 0;
  for (std::uint64_t s : SeedRange()) {
    const double ub = t.at({kUb, s}).stability_index;
    const bool v = ub >= t.at({kVegas, s}).stability_index;
    const bool w = ub >= t.at({kWestwood, s}).stability_index;
    vs_vegas += v;
    vs_westwood += w;
    wins += v && w;
  }
  const auto st = &SummaryRow::stability_index;
  return {wins >= kMajority,
          Fmt("ub >= both in %d/%d seeds (need %d); vs vegas %d, vs westwood %d; "
              "mean stability ub %.3f vegas %.3f westwood %.3f",
              wins, kSeeds, kMajority, vs_vegas, vs_westwood, Mean(t, kUb, st),
              Mean(t, kVegas, st), Mean(t, kWestwood, st))};
}

Outcome SpeedSpread(const Context& ctx) {
  const std::vector<double> speeds{0, 10, 25, 35};
  std::vector<Table> per_speed;
  for (double v : speeds) {
    SimConfig cfg = ScenarioDefaults(ScenarioName::kGoodputMobile);
    cfg.mobility.field.v_min = MetersPerSecond(v);
    cfg.mobility.field.v_max = MetersPerSecond(v);
    per_speed.push_back(RunTable(ScenarioName::kGoodputMobile, cfg,
                                 {kUb, kVegas, kWestwood}, ctx.jobs));
  }
  auto spread = [&](ControllerKind c, std::uint64_t s) {
    std::vector<double> g;
    for (const Table& t : per_speed) g.push_back(t.at({c, s}).goodput_bps);
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
    return mean > 0 ? (*hi - *lo) / mean : 0.0;
  };
  int wins = 0, vs_vegas = 0, vs_westwood = 0;
  double mean_spread[3] = {0, 0, 0};
  for (std::uint64_t s : SeedRange()) {
    const double ub = spread(kUb, s), ve = spread(kVegas, s), ww = spread(kWestwood, s);
    mean_spread[0] += ub / kSeeds;
    mean_spread[1] += ve / kSeeds;
    mean_spread[2] += ww / kSeeds;
    vs_vegas += ub <= ve;
    vs_westwood += ub <= ww;
    wins += ub <= ve && ub <= ww;
  }
  return {wins >= kMajority,
          Fmt("ub spread <= both in %d/%d seeds (need %d); vs vegas %d, vs westwood %d; "
              "mean spread ub %.3f vegas %.3f westwood %.3f",
              wins, kSeeds, kMajority, vs_vegas, vs_westwood, mean_spread[0],
              mean_spread[1], mean_spread[2])};
}

Outcome LossyConsumption(const Context& ctx) {
  const Table t = RunTable(ScenarioName::kBandwidth,
                           ScenarioDefaults(ScenarioName::kBandwidth),
                           {kUb, kWestwood}, ctx.jobs);
  const auto gp = &SummaryRow::goodput_bps;
  const double g_ub = Mean(t, kUb, gp), g_ww = Mean(t, kWestwood, gp);
  const double rel = std::abs(g_ub - g_ww) / std::max(g_ub, g_ww);
  int wins = 0;
  for (std::uint64_t s : SeedRange()) {
    wins += t.at({kUb, s}).consumed_bits <= t.at({kWestwood, s}).consumed_bits;
  }
  return {rel <= kGoodputMatch && wins >= kMajority,
          Fmt("mean goodput ub %.0f westwood %.0f bps (rel diff %.3f, limit %.2f); "
              "ub consumed <= westwood in %d/%d seeds (need %d)",
              g_ub, g_ww, rel, kGoodputMatch, wins, kSeeds, kMajority)};
}

// ---- 10

Outcome MobilityGeometry(const Context&) {
  std::string bad;
  FieldParams field;
  field.width = Meters(1000);
  field.height = Meters(1000);
  MobilityModel m(field, 10, 2024);
  int probes = 0;
  for (; probes < kMobilityProbes; ++probes) {
    const int node = probes % 10;
    const SimTime t(static_cast<std::int64_t>(probes / 10) * 14000);  // 0..140 s
    if (!field.Contains(m.PositionOf(node, t))) {
      bad = "position outside field";
      break;
    }
  }
  int legs = 0;
  for (int n = 0; n < 10 && bad.empty(); ++n) {
    for (const Leg& leg : m.LegsUntil(n, SimTime::FromSeconds(20000))) {
      ++legs;
      if (leg.speed.value() < field.v_floor.value() || leg.speed >= field.v_max) {
        bad = "speed out of bounds";
      }
    }
  }
  const bool boundary = LinkUp({0, 0}, {150, 200}, Meters(250)) &&
                        !LinkUp({0, 0}, {150, 201}, Meters(250));
  if (!boundary) bad = "range boundary";

  FieldParams wide;
  wide.width = Meters(2000);
  wide.height = Meters(100);
  const Leg stay{{0, 0}, {0, 0}, MetersPerSecond(0), SimTime(), SimTime(), SimTime()};
  const SimTime arrive = SimTime::FromSeconds(1000.0 / 35.0);
  const Leg walk{{0, 0}, {1000, 0}, MetersPerSecond(35), SimTime(), arrive, arrive};
  MobilityModel pair = MobilityModel::FromScript(wide, {{stay}, {walk}});
  const auto out = OutageSchedule(pair, {0, 1}, SimTime::FromSeconds(20), Seconds(0.1));
  const double onset = 250.0 / 35.0;
  const double got = out.empty() ? -1.0 : out.front().start.seconds();
  const bool onset_ok = !out.empty() && got >= onset && got - onset <= kOnsetTolS + 1e-9;
  if (!onset_ok && bad.empty()) bad = "outage onset";
  return {bad.empty(),
          Fmt("%d position probes, %d legs; boundary %s; onset %.3f s vs %.4f s%s%s",
              probes, legs, boundary ? "ok" : "wrong", got, onset,
              bad.empty() ? "" : "; failed: ", bad.c_str())};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(const Context&)> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  Context ctx;
  std::vector<int> only;
  ctx.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--cli", ctx.cli, "path to the ubsim binary")->required();
  app.add_option("--workdir", ctx.workdir, "scratch directory")->required();
  app.add_option("--only", only, "criterion ids to run")->delimiter(',');
  app.add_option("--jobs", ctx.jobs)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "decision table", DecisionTable},
      {2, "arithmetic anchors", ArithmeticAnchors},
      {3, "EWMA convergence", EwmaConvergence},
      {4, "determinism and runtime", Determinism},
      {5, "safety invariants under fuzzing", SafetyFuzz},
      {6, "conservation on exported traces", Conservation},
      {7, "congested cwnd stability", CongestedStability},
      {8, "goodput spread across speeds", SpeedSpread},
      {9, "bandwidth consumed at matched goodput", LossyConsumption},
      {10, "mobility geometry", MobilityGeometry},
  };

  try {
    fs::create_directories(ctx.workdir);
    int failed = 0, ran = 0;
    for (const Criterion& c : criteria) {
      if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
      const auto t0 = Clock::now();
      const Outcome o = c.check(ctx);
      ++ran;
      failed += o.pass ? 0 : 1;
      std::printf("%s criterion %d: %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id,
                  c.title, o.detail.c_str(), SecondsSince(t0));
      std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
}
