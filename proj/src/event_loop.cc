#include "ubtcp/event_loop.h"

namespace ubtcp {

namespace {

void Fold(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

void EventLoop::Schedule(SimTime at, EventKind kind, std::int32_t target,
                         std::uint64_t tag, const Packet& packet) {
  if (at < now_) throw std::logic_error("EventLoop: scheduling into the past");
  heap_.push(Event{at, next_seq_++, kind, target, tag, packet});
}

void EventLoop::Record(const Event& ev) {
  Fold(digest_, static_cast<std::uint64_t>(ev.fire_at.micros()));
  Fold(digest_, ev.seq);
  Fold(digest_, static_cast<std::uint64_t>(ev.kind));
  Fold(digest_, static_cast<std::uint64_t>(ev.target));
  Fold(digest_, ev.tag);
  Fold(digest_, static_cast<std::uint64_t>(ev.packet.seq_no));
}

}  // namespace ubtcp
