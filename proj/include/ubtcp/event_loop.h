#ifndef UBTCP_EVENT_LOOP_H_
#define UBTCP_EVENT_LOOP_H_

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ubtcp/packet.h"
#include "ubtcp/units.h"

namespace ubtcp {

enum class EventKind : std::uint8_t {
  kTxComplete,    // target = link, tag = link epoch
  kLinkArrival,   // target = link, tag = link epoch, packet
  kAckDelivery,   // target = flow, packet
  kRtoTimer,      // target = flow, tag = timer generation
  kLinkState,     // target = link, tag = 1 up / 0 down
  kCbrEmit,       // target = cbr source
  kFlowStart,     // target = flow
  kSample,
  kUser,          // free for tests and tools
};

struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kUser;
  std::int32_t target = 0;
  std::uint64_t tag = 0;
  Packet packet;
};

// Min-heap of events ordered by (fire_at, seq). seq is assigned at schedule
// time, so simultaneous events run in the order they were scheduled.
class EventLoop {
 public:
  // Throws std::logic_error when `at` precedes the current time.
  void Schedule(SimTime at, EventKind kind, std::int32_t target = 0,
                std::uint64_t tag = 0, const Packet& packet = {});

  // Dispatches events with fire_at <= end in order. Returns when the queue
  // is empty or the next event lies beyond `end`.
  template <typename Handler>
  void RunUntil(SimTime end, Handler&& handler) {
    while (!heap_.empty() && heap_.top().fire_at <= end) {
      Event ev = heap_.top();
      heap_.pop();
      now_ = ev.fire_at;
      Record(ev);
      ++dispatched_;
      handler(ev);
    }
  }

  SimTime now() const { return now_; }
  std::size_t pending() const { return heap_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }
  // FNV-1a over every dispatched (fire_at, seq, kind, target, tag, packet id).
  std::uint64_t digest() const { return digest_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  void Record(const Event& ev);

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  SimTime now_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

}  // namespace ubtcp

#endif  // UBTCP_EVENT_LOOP_H_
