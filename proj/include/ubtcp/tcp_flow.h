#ifndef UBTCP_TCP_FLOW_H_
#define UBTCP_TCP_FLOW_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "ubtcp/bandwidth_estimator.h"
#include "ubtcp/congestion_controller.h"
#include "ubtcp/packet.h"
#include "ubtcp/rtt_tracker.h"
#include "ubtcp/units.h"

namespace ubtcp {

// What a sender needs from the network around it.
class FlowHost {
 public:
  virtual ~FlowHost() = default;
  virtual void Transmit(const Packet& packet, SimTime now) = 0;
  virtual void ScheduleRto(std::int32_t flow_id, SimTime at,
                           std::uint64_t generation) = 0;
};

struct FlowCounters {
  std::int64_t data_transmissions = 0;  // including retransmissions
  std::int64_t retransmissions = 0;
  std::int64_t fast_retransmits = 0;
  std::int64_t timeouts = 0;
  std::int64_t dup_acks = 0;
  std::int64_t stale_acks = 0;
  std::int64_t acks_received = 0;
  std::int64_t acks_sent = 0;  // by the receiver
  std::int64_t data_drops = 0;
  std::int64_t ack_drops = 0;
  std::int64_t duplicate_deliveries = 0;
  // New data sent while in-flight had already reached cwnd. Must stay 0.
  std::int64_t window_violations = 0;
};

struct TimelinePoint {
  SimTime at;
  std::int64_t value = 0;
};

struct SenderConfig {
  std::int32_t flow_id = 0;
  Bytes seg_size{1040};
  RttTrackerConfig rtt;
};

// Bulk-data TCP sender: cumulative ACKs, fast retransmit on three duplicate
// ACKs, retransmission timer with backoff, Karn's rule for RTT samples.
class TcpSender {
 public:
  TcpSender(const SenderConfig& cfg,
            std::unique_ptr<CongestionController> controller, FlowHost& host);

  // Sends while the window allows.
  void TrySend(SimTime now);
  void OnAck(const Packet& ack, SimTime now);
  void OnRtoFired(std::uint64_t generation, SimTime now);

  // Segments in the network: outstanding, minus those marked lost, minus
  // those a duplicate ACK reported as having left.
  std::int64_t in_flight() const;
  std::int64_t outstanding() const { return high_seq_ - snd_una_; }
  std::int64_t snd_una() const { return snd_una_; }
  std::int64_t snd_nxt() const { return snd_nxt_; }
  std::int64_t high_seq() const { return high_seq_; }
  bool in_recovery() const { return recovery_ != Recovery::kNone; }
  bool rto_armed() const { return rto_armed_; }

  const CongestionController& controller() const { return *controller_; }
  const BandwidthEstimator& estimator() const { return estimator_; }
  const RttTracker& rtt() const { return rtt_; }
  const FlowCounters& counters() const { return counters_; }
  FlowCounters& mutable_counters() { return counters_; }
  const std::vector<TimelinePoint>& ack_timeline() const {
    return ack_timeline_;
  }
  const SenderConfig& config() const { return cfg_; }

 private:
  enum class Recovery { kNone, kLostSegmentOnly, kGoBackN };

  struct Outstanding {
    SimTime sent_at;
    bool retransmitted = false;
    bool lost = false;
  };

  Outstanding& Slot(std::int64_t seq) {
    return out_[static_cast<std::size_t>(seq - snd_una_)];
  }
  void Send(std::int64_t seq, bool retransmission, SimTime now);
  void RetransmitHole(SimTime now);
  void MarkAllLost();
  void ArmRto(SimTime now);
  void CancelRto();

  SenderConfig cfg_;
  std::unique_ptr<CongestionController> controller_;
  FlowHost& host_;
  BandwidthEstimator estimator_;
  RttTracker rtt_;

  std::deque<Outstanding> out_;  // index = seq - snd_una_
  std::int64_t snd_una_ = 0;
  std::int64_t snd_nxt_ = 0;
  std::int64_t high_seq_ = 0;
  std::int64_t lost_marked_ = 0;
  std::int64_t dupack_credit_ = 0;

  Recovery recovery_ = Recovery::kNone;
  std::int64_t recover_ = -1;  // high_seq_ when the last recovery began

  bool rto_armed_ = false;
  SimTime rto_deadline_;
  bool rto_event_pending_ = false;
  SimTime rto_event_at_;
  std::uint64_t rto_generation_ = 0;

  FlowCounters counters_;
  std::vector<TimelinePoint> ack_timeline_;
};

// Cumulative-ACK receiver with an out-of-order buffer; one ACK per data
// segment received.
class TcpReceiver {
 public:
  explicit TcpReceiver(std::int32_t flow_id, Bytes ack_size = Bytes(40));

  Packet OnData(const Packet& data, SimTime now);

  std::int64_t next_expected() const { return next_expected_; }
  std::int64_t duplicates() const { return duplicates_; }
  std::int64_t acks_sent() const { return acks_sent_; }
  // Cumulative in-order delivered segments each time it advanced.
  const std::vector<TimelinePoint>& delivery_timeline() const {
    return delivery_timeline_;
  }

 private:
  std::int32_t flow_id_;
  Bytes ack_size_;
  std::int64_t next_expected_ = 0;
  std::set<std::int64_t> out_of_order_;
  std::int64_t duplicates_ = 0;
  std::int64_t acks_sent_ = 0;
  std::vector<TimelinePoint> delivery_timeline_;
};

}  // namespace ubtcp

#endif  // UBTCP_TCP_FLOW_H_
