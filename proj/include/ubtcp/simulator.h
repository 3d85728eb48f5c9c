#ifndef UBTCP_SIMULATOR_H_
#define UBTCP_SIMULATOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ubtcp/congestion_controller.h"
#include "ubtcp/event_loop.h"
#include "ubtcp/link.h"
#include "ubtcp/mobility.h"
#include "ubtcp/tcp_flow.h"
#include "ubtcp/units.h"

namespace ubtcp {

struct CbrConfig {
  int sources = 1;  // 0 disables cross-traffic
  double rate_pps = 8.0;
};

struct MobilityConfig {
  bool enabled = true;
  FieldParams field;
  Seconds outage_dt{0.1};
  Seconds trace_interval{1.0};
};

// Everything one simulation run needs. Flows share a relay chain of `hops`
// links; CBR sources inject at the head of the same chain.
struct SimConfig {
  Seconds duration{140.0};
  std::uint64_t seed = 42;
  Seconds sample_interval{0.1};

  int hops = 3;
  LinkConfig link;
  // Route ACKs through queued reverse links (with the same loss rate)
  // instead of an uncongested reverse path.
  bool symmetric_ack_path = false;

  Bytes header_size{40};
  Bytes ack_size{40};
  ControllerConfig controller;
  RttTrackerConfig rtt;
  CbrConfig cbr;
  MobilityConfig mobility;

  int flows = 2;
  Seconds flow_stagger{1.0};
  // Controller of every flow after the first; unset means same as flow 0.
  std::optional<ControllerKind> competitor;

  // Half-width of the band around the median cwnd counted as stable.
  double stability_band = 0.2;

  Bytes payload_size() const { return controller.seg_size - header_size; }
  // Throws std::invalid_argument naming the bad setting.
  void Validate() const;
};

struct TraceSample {
  SimTime at;
  Segments cwnd;
  Segments ssthresh;
  Rate bwe;
  Rate send_bwe;
  double diff = 0.0;
  std::optional<ControllerAction> action;
  std::int64_t in_flight = 0;
  std::int64_t acked_segments = 0;      // cumulative ACK at the sender
  std::int64_t delivered_segments = 0;  // in-order at the receiver
  std::int64_t data_transmissions = 0;
  std::int64_t retransmissions = 0;
};

struct FlowTrace {
  std::int32_t flow_id = 0;
  ControllerKind controller = ControllerKind::kUb;
  Bytes seg_size{1040};
  Bytes payload_size{1000};
  Bytes ack_size{40};
  std::vector<TraceSample> samples;
  std::vector<TimelinePoint> ack_timeline;
  std::vector<TimelinePoint> delivery_timeline;
  FlowCounters counters;
};

struct MobilitySample {
  SimTime at;
  std::int32_t node = 0;
  Point position;
};

struct SimulationResult {
  std::vector<FlowTrace> flows;
  std::vector<LinkStats> links;
  std::vector<std::vector<Interval>> hop_outages;
  std::vector<MobilitySample> mobility;
  std::int64_t cbr_sent = 0;
  std::int64_t cbr_delivered = 0;
  std::uint64_t event_digest = 0;
  std::uint64_t events = 0;
};

// Emission instants of a constant-rate source: start + k/rate for every k
// with the instant strictly before `horizon`. Throws std::invalid_argument
// for a nonpositive rate.
std::vector<SimTime> CbrEmissionTimes(double rate_pps, SimTime start,
                                      SimTime horizon);

class Simulator : private FlowHost {
 public:
  // One TCP flow per entry in `controllers`.
  Simulator(const SimConfig& cfg, std::vector<ControllerKind> controllers);
  ~Simulator() override;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimulationResult Run();

  // Invariant hook, called after every dispatched event.
  using Monitor = std::function<void(const Simulator&)>;
  void set_monitor(Monitor monitor) { monitor_ = std::move(monitor); }

  const std::vector<std::unique_ptr<TcpSender>>& senders() const {
    return senders_;
  }
  const std::vector<Link>& links() const { return links_; }
  SimTime now() const { return loop_.now(); }

 private:
  void Transmit(const Packet& packet, SimTime now) override;
  void ScheduleRto(std::int32_t flow_id, SimTime at,
                   std::uint64_t generation) override;

  void Dispatch(const Event& ev);
  void OnLinkArrival(const Event& ev);
  void DeliverAck(const Packet& ack, SimTime now);
  void OnDrop(const Packet& p);
  void TakeSample(SimTime now);
  void ScheduleMobility();

  int reverse_link(int hop) const { return cfg_.hops + hop; }

  SimConfig cfg_;
  EventLoop loop_;
  std::vector<Link> links_;
  std::vector<std::unique_ptr<TcpSender>> senders_;
  std::vector<TcpReceiver> receivers_;
  std::vector<FlowTrace> traces_;
  std::vector<std::vector<SimTime>> cbr_times_;
  std::vector<std::size_t> cbr_next_;
  std::int64_t cbr_sent_ = 0;
  std::int64_t cbr_delivered_ = 0;
  std::optional<MobilityModel> mobility_;
  std::vector<std::vector<Interval>> hop_outages_;
  Monitor monitor_;
};

}  // namespace ubtcp

#endif  // UBTCP_SIMULATOR_H_
