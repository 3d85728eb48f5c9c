#include "ubtcp/link.h"

#include <algorithm>
#include <stdexcept>

namespace ubtcp {

void LinkConfig::Validate() const {
  if (!(bandwidth.value() > 0.0)) throw std::invalid_argument("link.bandwidth_bps must be > 0");
  if (!(prop_delay.value() >= 0.0)) throw std::invalid_argument("link.prop_delay_s must be >= 0");
  if (queue_capacity < 0) throw std::invalid_argument("link.queue_packets must be >= 0");
  if (!(loss_rate >= 0.0 && loss_rate < 1.0)) {
    throw std::invalid_argument("link.loss_rate must be in [0, 1)");
  }
}

Link::Link(std::int32_t id, const LinkConfig& cfg, Rng loss_rng)
    : id_(id), cfg_(cfg), loss_rng_(loss_rng) {
  cfg_.Validate();
}

void Link::Drop(const Packet& p, DropReason reason) {
  switch (reason) {
    case DropReason::kLinkDown: ++stats_.dropped_down; break;
    case DropReason::kQueueFull: ++stats_.dropped_full; break;
    case DropReason::kOutage: ++stats_.dropped_outage; break;
    case DropReason::kRandomLoss: ++stats_.dropped_random; break;
  }
  if (on_drop_) on_drop_(p, reason);
}

bool Link::Enqueue(const Packet& packet, SimTime now, EventLoop& loop) {
  if (!up_) {
    Drop(packet, DropReason::kLinkDown);
    return false;
  }
  if (queue_.size() >= static_cast<std::size_t>(cfg_.queue_capacity)) {
    Drop(packet, DropReason::kQueueFull);
    return false;
  }
  ++stats_.enqueued;
  queue_.push_back(packet);
  stats_.max_queue = std::max(stats_.max_queue, queue_.size());
  if (!in_tx_) StartNext(now, loop);
  return true;
}

void Link::StartNext(SimTime now, EventLoop& loop) {
  if (!up_ || queue_.empty()) return;
  in_tx_ = queue_.front();
  queue_.pop_front();
  const Seconds tx = TransmissionTime(BitsOf(in_tx_->size), cfg_.bandwidth);
  loop.Schedule(now + ToMicros(tx), EventKind::kTxComplete, id_, epoch_);
}

void Link::OnTxComplete(std::uint64_t epoch, SimTime now, EventLoop& loop) {
  if (epoch != epoch_ || !in_tx_) return;
  Packet p = *in_tx_;
  in_tx_.reset();
  if (cfg_.loss_rate > 0.0 && loss_rng_.Bernoulli(cfg_.loss_rate)) {
    Drop(p, DropReason::kRandomLoss);
  } else {
    loop.Schedule(now + ToMicros(cfg_.prop_delay), EventKind::kLinkArrival, id_,
                  epoch_, p);
  }
  StartNext(now, loop);
}

bool Link::AcceptArrival(const Packet& packet, std::uint64_t epoch) {
  if (epoch != epoch_) {
    Drop(packet, DropReason::kOutage);
    return false;
  }
  ++stats_.delivered;
  return true;
}

void Link::SetUp(bool up, SimTime now, EventLoop& loop) {
  if (up == up_) return;
  up_ = up;
  if (!up) {
    ++epoch_;
    if (in_tx_) {
      Drop(*in_tx_, DropReason::kOutage);
      in_tx_.reset();
    }
    return;
  }
  StartNext(now, loop);
}

}  // namespace ubtcp
