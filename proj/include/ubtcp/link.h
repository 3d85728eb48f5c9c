#ifndef UBTCP_LINK_H_
#define UBTCP_LINK_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>

#include "ubtcp/event_loop.h"
#include "ubtcp/packet.h"
#include "ubtcp/rng.h"
#include "ubtcp/units.h"

namespace ubtcp {

struct LinkConfig {
  Rate bandwidth{2e6};
  Seconds prop_delay{0.01};
  int queue_capacity = 80;
  // Per-packet loss on the air, applied after serialization.
  double loss_rate = 0.0;

  void Validate() const;
};

enum class DropReason { kLinkDown, kQueueFull, kOutage, kRandomLoss };

struct LinkStats {
  std::int64_t enqueued = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped_down = 0;
  std::int64_t dropped_full = 0;
  std::int64_t dropped_outage = 0;
  std::int64_t dropped_random = 0;
  std::size_t max_queue = 0;
};

// Point-to-point hop: drop-tail FIFO in front of a serializing transmitter,
// then a fixed propagation delay. Going down drops whatever is being
// serialized or propagated; queued packets wait for the link to return.
class Link {
 public:
  using DropObserver = std::function<void(const Packet&, DropReason)>;

  Link(std::int32_t id, const LinkConfig& cfg, Rng loss_rng);

  void set_drop_observer(DropObserver observer) {
    on_drop_ = std::move(observer);
  }

  // Returns false when the packet was dropped (link down or queue full).
  bool Enqueue(const Packet& packet, SimTime now, EventLoop& loop);

  // Handles kTxComplete; schedules the propagation arrival unless the packet
  // was lost on the air, then starts the next queued packet.
  void OnTxComplete(std::uint64_t epoch, SimTime now, EventLoop& loop);

  // Handles kLinkArrival. False when an outage hit the packet in flight.
  bool AcceptArrival(const Packet& packet, std::uint64_t epoch);

  void SetUp(bool up, SimTime now, EventLoop& loop);

  std::int32_t id() const { return id_; }
  bool up() const { return up_; }
  bool busy() const { return in_tx_.has_value(); }
  std::size_t queue_length() const { return queue_.size(); }
  const LinkConfig& config() const { return cfg_; }
  const LinkStats& stats() const { return stats_; }

 private:
  void StartNext(SimTime now, EventLoop& loop);
  void Drop(const Packet& p, DropReason reason);

  std::int32_t id_;
  LinkConfig cfg_;
  Rng loss_rng_;
  DropObserver on_drop_;
  std::deque<Packet> queue_;
  std::optional<Packet> in_tx_;
  bool up_ = true;
  std::uint64_t epoch_ = 0;
  LinkStats stats_;
};

}  // namespace ubtcp

#endif  // UBTCP_LINK_H_
