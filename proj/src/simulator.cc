#include "ubtcp/simulator.h"

#include <cmath>
#include <stdexcept>

namespace ubtcp {

namespace {
constexpr std::uint64_t kLossStreamBase = 0x2000;
}  // namespace

void SimConfig::Validate() const {
  if (!(duration.value() > 0.0)) throw std::invalid_argument("sim.duration_s must be > 0");
  if (!(sample_interval.value() > 0.0)) {
    throw std::invalid_argument("sim.sample_interval_s must be > 0");
  }
  if (hops < 1) throw std::invalid_argument("link.hops must be >= 1");
  link.Validate();
  controller.Validate();
  if (header_size.value() < 0 || header_size >= controller.seg_size) {
    throw std::invalid_argument(
        "packet.header_bytes must be >= 0 and below controller.seg_size");
  }
  if (ack_size.value() <= 0) throw std::invalid_argument("packet.ack_bytes must be > 0");
  if (mobility.enabled) {
    mobility.field.Validate();
    if (!(mobility.outage_dt.value() > 0.0)) {
      throw std::invalid_argument("mobility.outage_dt_s must be > 0");
    }
  }
  if (!(mobility.trace_interval.value() > 0.0)) {
    throw std::invalid_argument("mobility.trace_interval_s must be > 0");
  }
  if (cbr.sources < 0) throw std::invalid_argument("cbr.sources must be >= 0");
  if (cbr.sources > 0 && !(cbr.rate_pps > 0.0)) {
    throw std::invalid_argument("cbr.rate_pps must be > 0");
  }
  if (flows < 1) throw std::invalid_argument("flow.count must be >= 1");
  if (!(flow_stagger.value() >= 0.0)) {
    throw std::invalid_argument("flow.stagger_s must be >= 0");
  }
}

std::vector<SimTime> CbrEmissionTimes(double rate_pps, SimTime start,
                                      SimTime horizon) {
  if (!(rate_pps > 0.0)) throw std::invalid_argument("CBR rate must be > 0");
  std::vector<SimTime> times;
  for (std::int64_t k = 0;; ++k) {
    const SimTime t = start + ToMicros(Seconds(static_cast<double>(k) / rate_pps));
    if (t >= horizon) break;
    times.push_back(t);
  }
  return times;
}

Simulator::Simulator(const SimConfig& cfg,
                     std::vector<ControllerKind> controllers)
    : cfg_(cfg) {
  cfg_.Validate();
  if (controllers.empty()) throw std::invalid_argument("Simulator: no flows");
  const SimTime horizon = SimTime::FromSeconds(cfg_.duration.value());

  const int link_count = cfg_.symmetric_ack_path ? 2 * cfg_.hops : cfg_.hops;
  links_.reserve(static_cast<std::size_t>(link_count));
  for (int i = 0; i < link_count; ++i) {
    links_.emplace_back(i, cfg_.link,
                        Rng::ForStream(cfg_.seed, kLossStreamBase + i));
    links_.back().set_drop_observer(
        [this](const Packet& p, DropReason) { OnDrop(p); });
  }

  for (std::size_t i = 0; i < controllers.size(); ++i) {
    const auto id = static_cast<std::int32_t>(i);
    SenderConfig sc{id, cfg_.controller.seg_size, cfg_.rtt};
    senders_.push_back(std::make_unique<TcpSender>(
        sc, MakeController(controllers[i], cfg_.controller),
        static_cast<FlowHost&>(*this)));
    receivers_.emplace_back(id, cfg_.ack_size);
    FlowTrace trace;
    trace.flow_id = id;
    trace.controller = controllers[i];
    trace.seg_size = cfg_.controller.seg_size;
    trace.payload_size = cfg_.payload_size();
    trace.ack_size = cfg_.ack_size;
    traces_.push_back(std::move(trace));
  }

  ScheduleMobility();

  if (cfg_.cbr.sources > 0) {
    const double spacing = 1.0 / cfg_.cbr.rate_pps;
    for (int k = 0; k < cfg_.cbr.sources; ++k) {
      const SimTime start = SimTime::Zero() +
          ToMicros(Seconds(spacing * k / cfg_.cbr.sources));
      cbr_times_.push_back(CbrEmissionTimes(cfg_.cbr.rate_pps, start, horizon));
      cbr_next_.push_back(0);
      if (!cbr_times_.back().empty()) {
        loop_.Schedule(cbr_times_.back().front(), EventKind::kCbrEmit, k);
      }
    }
  }

  for (std::size_t i = 0; i < senders_.size(); ++i) {
    const SimTime start = SimTime::Zero() +
        ToMicros(cfg_.flow_stagger * static_cast<double>(i));
    if (start < horizon) {
      loop_.Schedule(start, EventKind::kFlowStart, static_cast<std::int32_t>(i));
    }
  }

  const auto samples = static_cast<std::int64_t>(
      std::llround(cfg_.duration.value() / cfg_.sample_interval.value()));
  const Micros step = ToMicros(cfg_.sample_interval);
  for (std::int64_t k = 1; k <= samples; ++k) {
    loop_.Schedule(SimTime(k * step.value()), EventKind::kSample);
  }
}

Simulator::~Simulator() = default;

void Simulator::ScheduleMobility() {
  hop_outages_.assign(static_cast<std::size_t>(cfg_.hops), {});
  if (!cfg_.mobility.enabled) return;
  const SimTime horizon = SimTime::FromSeconds(cfg_.duration.value());
  mobility_.emplace(cfg_.mobility.field, cfg_.hops + 1, cfg_.seed);
  for (int hop = 0; hop < cfg_.hops; ++hop) {
    hop_outages_[static_cast<std::size_t>(hop)] =
        OutageSchedule(*mobility_, {hop, hop + 1}, horizon, cfg_.mobility.outage_dt);
    for (const Interval& down : hop_outages_[static_cast<std::size_t>(hop)]) {
      loop_.Schedule(down.start, EventKind::kLinkState, hop, 0);
      if (cfg_.symmetric_ack_path) {
        loop_.Schedule(down.start, EventKind::kLinkState, reverse_link(hop), 0);
      }
      if (down.end < horizon) {
        loop_.Schedule(down.end, EventKind::kLinkState, hop, 1);
        if (cfg_.symmetric_ack_path) {
          loop_.Schedule(down.end, EventKind::kLinkState, reverse_link(hop), 1);
        }
      }
    }
  }
}

SimulationResult Simulator::Run() {
  const SimTime end = SimTime::FromSeconds(cfg_.duration.value());
  loop_.RunUntil(end, [this](const Event& ev) {
    Dispatch(ev);
    if (monitor_) monitor_(*this);
  });

  SimulationResult result;
  for (std::size_t i = 0; i < senders_.size(); ++i) {
    FlowTrace trace = traces_[i];
    trace.ack_timeline = senders_[i]->ack_timeline();
    trace.delivery_timeline = receivers_[i].delivery_timeline();
    trace.counters = senders_[i]->counters();
    trace.counters.acks_sent = receivers_[i].acks_sent();
    trace.counters.duplicate_deliveries = receivers_[i].duplicates();
    result.flows.push_back(std::move(trace));
  }
  for (const Link& link : links_) result.links.push_back(link.stats());
  result.hop_outages = hop_outages_;
  if (mobility_) {
    const Micros step = ToMicros(cfg_.mobility.trace_interval);
    for (SimTime t = SimTime::Zero(); t <= end; t = t + step) {
      for (int n = 0; n < mobility_->node_count(); ++n) {
        result.mobility.push_back(MobilitySample{t, n, mobility_->PositionOf(n, t)});
      }
    }
  }
  result.cbr_sent = cbr_sent_;
  result.cbr_delivered = cbr_delivered_;
  result.event_digest = loop_.digest();
  result.events = loop_.dispatched();
  return result;
}

void Simulator::Dispatch(const Event& ev) {
  const SimTime now = ev.fire_at;
  switch (ev.kind) {
    case EventKind::kTxComplete:
      links_[static_cast<std::size_t>(ev.target)].OnTxComplete(ev.tag, now, loop_);
      break;
    case EventKind::kLinkArrival:
      OnLinkArrival(ev);
      break;
    case EventKind::kAckDelivery:
      senders_[static_cast<std::size_t>(ev.target)]->OnAck(ev.packet, now);
      break;
    case EventKind::kRtoTimer:
      senders_[static_cast<std::size_t>(ev.target)]->OnRtoFired(ev.tag, now);
      break;
    case EventKind::kLinkState:
      links_[static_cast<std::size_t>(ev.target)].SetUp(ev.tag == 1, now, loop_);
      break;
    case EventKind::kCbrEmit: {
      const auto k = static_cast<std::size_t>(ev.target);
      Packet p;
      p.flow_id = ev.target;
      p.seq_no = static_cast<std::int64_t>(cbr_next_[k]);
      p.size = cfg_.controller.seg_size;
      p.kind = PacketKind::kCbr;
      p.sent_at = now;
      ++cbr_sent_;
      links_[0].Enqueue(p, now, loop_);
      if (++cbr_next_[k] < cbr_times_[k].size()) {
        loop_.Schedule(cbr_times_[k][cbr_next_[k]], EventKind::kCbrEmit, ev.target);
      }
      break;
    }
    case EventKind::kFlowStart:
      senders_[static_cast<std::size_t>(ev.target)]->TrySend(now);
      break;
    case EventKind::kSample:
      TakeSample(now);
      break;
    case EventKind::kUser:
      break;
  }
}

void Simulator::Transmit(const Packet& packet, SimTime now) {
  Packet p = packet;
  p.hop = 0;
  links_[0].Enqueue(p, now, loop_);
}

void Simulator::ScheduleRto(std::int32_t flow_id, SimTime at,
                            std::uint64_t generation) {
  loop_.Schedule(at, EventKind::kRtoTimer, flow_id, generation);
}

void Simulator::OnLinkArrival(const Event& ev) {
  Link& link = links_[static_cast<std::size_t>(ev.target)];
  if (!link.AcceptArrival(ev.packet, ev.tag)) return;
  const SimTime now = ev.fire_at;
  Packet p = ev.packet;

  if (p.kind == PacketKind::kAck) {
    // Reverse chain: hop counts crossings from the receiver end.
    const int next = p.hop + 1;
    if (next < cfg_.hops) {
      p.hop = next;
      links_[static_cast<std::size_t>(reverse_link(cfg_.hops - 1 - next))]
          .Enqueue(p, now, loop_);
    } else {
      senders_[static_cast<std::size_t>(p.flow_id)]->OnAck(p, now);
    }
    return;
  }

  const int next = p.hop + 1;
  if (next < cfg_.hops) {
    p.hop = next;
    links_[static_cast<std::size_t>(next)].Enqueue(p, now, loop_);
    return;
  }
  if (p.kind == PacketKind::kCbr) {
    ++cbr_delivered_;
    return;
  }
  DeliverAck(receivers_[static_cast<std::size_t>(p.flow_id)].OnData(p, now), now);
}

void Simulator::DeliverAck(const Packet& ack, SimTime now) {
  if (cfg_.symmetric_ack_path) {
    Packet p = ack;
    p.hop = 0;
    links_[static_cast<std::size_t>(reverse_link(cfg_.hops - 1))].Enqueue(p, now, loop_);
    return;
  }
  // Uncongested reverse path over the same radio hops.
  Seconds delay(0.0);
  for (int hop = 0; hop < cfg_.hops; ++hop) {
    if (!links_[static_cast<std::size_t>(hop)].up()) {
      ++senders_[static_cast<std::size_t>(ack.flow_id)]->mutable_counters().ack_drops;
      return;
    }
    delay += cfg_.link.prop_delay + TransmissionTime(BitsOf(ack.size), cfg_.link.bandwidth);
  }
  loop_.Schedule(now + ToMicros(delay), EventKind::kAckDelivery, ack.flow_id, 0, ack);
}

void Simulator::OnDrop(const Packet& p) {
  if (p.kind == PacketKind::kCbr) return;
  auto& counters = senders_[static_cast<std::size_t>(p.flow_id)]->mutable_counters();
  if (p.kind == PacketKind::kData) {
    ++counters.data_drops;
  } else {
    ++counters.ack_drops;
  }
}

void Simulator::TakeSample(SimTime now) {
  for (std::size_t i = 0; i < senders_.size(); ++i) {
    const TcpSender& s = *senders_[i];
    const CcState& st = s.controller().state();
    TraceSample sample;
    sample.at = now;
    sample.cwnd = st.cwnd;
    sample.ssthresh = st.ssthresh;
    sample.bwe = s.estimator().current_bwe();
    sample.send_bwe = s.estimator().send_bwe();
    if (const auto& d = s.controller().last_decision()) {
      sample.diff = d->diff;
      sample.action = d->action;
    }
    sample.in_flight = s.in_flight();
    sample.acked_segments = s.snd_una();
    sample.delivered_segments = receivers_[i].next_expected();
    sample.data_transmissions = s.counters().data_transmissions;
    sample.retransmissions = s.counters().retransmissions;
    traces_[i].samples.push_back(sample);
  }
}

}  // namespace ubtcp
