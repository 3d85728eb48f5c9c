#ifndef UBTCP_PACKET_H_
#define UBTCP_PACKET_H_

#include <cstdint>

#include "ubtcp/units.h"

namespace ubtcp {

enum class PacketKind : std::uint8_t { kData, kAck, kCbr };

struct Packet {
  std::int32_t flow_id = 0;  // CBR source index for kCbr
  std::int64_t seq_no = 0;
  Bytes size{0};
  PacketKind kind = PacketKind::kData;
  SimTime sent_at;
  bool retransmission = false;
  // Index of the hop the packet is about to cross (or is crossing).
  std::int32_t hop = 0;

  // ACK fields: next expected sequence number, plus an echo of the data
  // segment that triggered the ACK.
  std::int64_t cum_ack = 0;
  SimTime echo_sent_at;
  bool echo_retransmission = false;
};

}  // namespace ubtcp

#endif  // UBTCP_PACKET_H_
