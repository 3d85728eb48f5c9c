#include "ubtcp/tcp_flow.h"

#include <algorithm>

namespace ubtcp {

TcpSender::TcpSender(const SenderConfig& cfg,
                     std::unique_ptr<CongestionController> controller,
                     FlowHost& host)
    : cfg_(cfg),
      controller_(std::move(controller)),
      host_(host),
      estimator_(controller_->config().ewma_gain),
      rtt_(cfg.rtt) {}

std::int64_t TcpSender::in_flight() const {
  return std::max<std::int64_t>(0, outstanding() - lost_marked_ - dupack_credit_);
}

void TcpSender::TrySend(SimTime now) {
  for (;;) {
    while (snd_nxt_ < high_seq_ && !Slot(snd_nxt_).lost) ++snd_nxt_;
    const std::int64_t cwnd = controller_->state().cwnd.value();
    if (in_flight() >= cwnd) break;
    if (snd_nxt_ < high_seq_) {
      Send(snd_nxt_, /*retransmission=*/true, now);
    } else {
      out_.push_back(Outstanding{now, false, false});
      ++high_seq_;
      Send(snd_nxt_, /*retransmission=*/false, now);
    }
    ++snd_nxt_;
  }
}

void TcpSender::Send(std::int64_t seq, bool retransmission, SimTime now) {
  Outstanding& slot = Slot(seq);
  if (retransmission) {
    if (slot.lost) {
      slot.lost = false;
      --lost_marked_;
    }
    slot.retransmitted = true;
    ++counters_.retransmissions;
  } else if (in_flight() > controller_->state().cwnd.value()) {
    ++counters_.window_violations;
  }
  slot.sent_at = now;

  Packet p;
  p.flow_id = cfg_.flow_id;
  p.seq_no = seq;
  p.size = cfg_.seg_size;
  p.kind = PacketKind::kData;
  p.sent_at = now;
  p.retransmission = retransmission;
  host_.Transmit(p, now);
  ++counters_.data_transmissions;
  estimator_.RecordSend(cfg_.seg_size, now);
  if (!rto_armed_) ArmRto(now);
}

void TcpSender::RetransmitHole(SimTime now) {
  if (outstanding() == 0) return;
  Send(snd_una_, /*retransmission=*/true, now);
}

void TcpSender::MarkAllLost() {
  for (auto& slot : out_) {
    if (!slot.lost) {
      slot.lost = true;
      ++lost_marked_;
    }
  }
  dupack_credit_ = 0;
}

void TcpSender::OnAck(const Packet& ack, SimTime now) {
  ++counters_.acks_received;
  const std::int64_t cum = ack.cum_ack;
  if (cum < snd_una_ || cum > high_seq_) {
    ++counters_.stale_acks;
    return;
  }

  if (cum == snd_una_) {
    if (outstanding() == 0) {
      ++counters_.stale_acks;
      return;
    }
    ++counters_.dup_acks;
    dupack_credit_ =
        std::min(dupack_credit_ + 1, outstanding() - lost_marked_);
    // Duplicates caused by the previous episode's retransmissions must not
    // start another one.
    if (recovery_ == Recovery::kNone && snd_una_ > recover_ &&
        controller_->OnDupAck(rtt_, estimator_)) {
      ++counters_.fast_retransmits;
      recover_ = high_seq_;
      if (controller_->recovery_style() == RecoveryStyle::kLostSegmentOnly) {
        recovery_ = Recovery::kLostSegmentOnly;
        RetransmitHole(now);
      } else {
        recovery_ = Recovery::kGoBackN;
        MarkAllLost();
        snd_nxt_ = snd_una_;
      }
    }
    TrySend(now);
    return;
  }

  const std::int64_t newly = cum - snd_una_;
  std::optional<RttSample> sample;
  if (!ack.echo_retransmission) {
    const Micros rtt = now - ack.echo_sent_at;
    if (rtt.value() > 0) sample = RttSample{ToSeconds(rtt), now};
  }
  estimator_.RecordAck(newly, cfg_.seg_size, now);
  if (sample) rtt_.Update(*sample);

  for (std::int64_t i = 0; i < newly; ++i) {
    if (out_.front().lost) --lost_marked_;
    out_.pop_front();
  }
  snd_una_ = cum;
  snd_nxt_ = std::max(snd_nxt_, snd_una_);
  dupack_credit_ = 0;
  ack_timeline_.push_back(TimelinePoint{now, cum});

  bool partial = false;
  if (recovery_ != Recovery::kNone) {
    if (cum >= recover_) {
      recovery_ = Recovery::kNone;
    } else {
      partial = true;
    }
  }
  controller_->OnAck(AckInfo{now, sample, newly}, rtt_, estimator_);
  if (partial && recovery_ == Recovery::kLostSegmentOnly) RetransmitHole(now);

  if (outstanding() > 0) {
    ArmRto(now);
  } else {
    CancelRto();
  }
  TrySend(now);
}

void TcpSender::ArmRto(SimTime now) {
  rto_armed_ = true;
  rto_deadline_ = now + ToMicros(rtt_.rto());
  // One timer event in the loop at a time; a later deadline is picked up
  // when the pending event fires.
  if (!rto_event_pending_ || rto_deadline_ < rto_event_at_) {
    rto_event_pending_ = true;
    rto_event_at_ = rto_deadline_;
    host_.ScheduleRto(cfg_.flow_id, rto_deadline_, ++rto_generation_);
  }
}

void TcpSender::CancelRto() { rto_armed_ = false; }

void TcpSender::OnRtoFired(std::uint64_t generation, SimTime now) {
  if (generation != rto_generation_) return;
  rto_event_pending_ = false;
  if (!rto_armed_) return;
  if (now < rto_deadline_) {
    rto_event_pending_ = true;
    rto_event_at_ = rto_deadline_;
    host_.ScheduleRto(cfg_.flow_id, rto_deadline_, ++rto_generation_);
    return;
  }
  rto_armed_ = false;
  if (outstanding() == 0) return;

  ++counters_.timeouts;
  controller_->OnTimeout(rtt_, estimator_);
  rtt_.Backoff();
  MarkAllLost();
  snd_nxt_ = snd_una_;
  recovery_ = Recovery::kGoBackN;
  recover_ = high_seq_;
  TrySend(now);
  if (!rto_armed_) ArmRto(now);
}

TcpReceiver::TcpReceiver(std::int32_t flow_id, Bytes ack_size)
    : flow_id_(flow_id), ack_size_(ack_size) {}

Packet TcpReceiver::OnData(const Packet& data, SimTime now) {
  if (data.seq_no == next_expected_) {
    ++next_expected_;
    while (!out_of_order_.empty() && *out_of_order_.begin() == next_expected_) {
      out_of_order_.erase(out_of_order_.begin());
      ++next_expected_;
    }
    delivery_timeline_.push_back(TimelinePoint{now, next_expected_});
  } else if (data.seq_no > next_expected_) {
    if (!out_of_order_.insert(data.seq_no).second) ++duplicates_;
  } else {
    ++duplicates_;
  }

  Packet ack;
  ack.flow_id = flow_id_;
  ack.seq_no = data.seq_no;
  ack.size = ack_size_;
  ack.kind = PacketKind::kAck;
  ack.sent_at = now;
  ack.cum_ack = next_expected_;
  ack.echo_sent_at = data.sent_at;
  ack.echo_retransmission = data.retransmission;
  ++acks_sent_;
  return ack;
}

}  // namespace ubtcp
