#ifndef UBTCP_BANDWIDTH_ESTIMATOR_H_
#define UBTCP_BANDWIDTH_ESTIMATOR_H_

#include <cstdint>
#include <optional>

#include "ubtcp/units.h"

namespace ubtcp {

// Exponentially weighted average of sample length over sample interval.
//
// The first sample only records the timestamp and seeds the length average;
// the second seeds the interval average. From then on every sample moves
// both averages by (1 - gain). Samples arriving in the same microsecond as
// the previous one carry no interval and are skipped, but still advance the
// timestamp.
class EwmaRateFilter {
 public:
  explicit EwmaRateFilter(double gain);

  void AddSample(double length_bits, SimTime now);

  // avg_len / avg_interval once two samples have been taken, else 0.
  Rate rate() const;

  double avg_length_bits() const { return avg_length_bits_; }
  Seconds avg_interval() const { return Seconds(avg_interval_s_); }
  std::int64_t sample_count() const { return sample_count_; }
  std::optional<SimTime> last_time() const { return last_time_; }
  double gain() const { return gain_; }

 private:
  double gain_;
  double avg_length_bits_ = 0.0;
  double avg_interval_s_ = 0.0;
  std::int64_t sample_count_ = 0;
  std::optional<SimTime> last_time_;
};

// Send-side and ACK-side bandwidth estimation for one flow. The ACK-side
// estimate is what the controllers consume; the send-side one is kept for
// traces.
class BandwidthEstimator {
 public:
  static constexpr double kDefaultGain = 0.9;

  explicit BandwidthEstimator(double gain = kDefaultGain);

  void RecordSend(Bytes packet_size, SimTime now);

  // `acked` newly covered segments of `packet_size` each. Throws
  // std::invalid_argument when acked < 1.
  void RecordAck(std::int64_t acked, Bytes packet_size, SimTime now);

  // For ACKs covering segments of mixed size: the exact byte count covered.
  void RecordAckBytes(Bytes covered, SimTime now);

  // ACK-side estimate.
  Rate current_bwe() const { return ack_.rate(); }
  Rate send_bwe() const { return send_.rate(); }

  const EwmaRateFilter& ack_filter() const { return ack_; }
  const EwmaRateFilter& send_filter() const { return send_; }

 private:
  EwmaRateFilter send_;
  EwmaRateFilter ack_;
};

}  // namespace ubtcp

#endif  // UBTCP_BANDWIDTH_ESTIMATOR_H_
