#include "ubtcp/bandwidth_estimator.h"

#include <stdexcept>

namespace ubtcp {

EwmaRateFilter::EwmaRateFilter(double gain) : gain_(gain) {
  if (!(gain >= 0.0 && gain < 1.0)) {
    throw std::invalid_argument("EWMA gain must be in [0, 1)");
  }
}

void EwmaRateFilter::AddSample(double length_bits, SimTime now) {
  if (!last_time_) {
    avg_length_bits_ = length_bits;
    last_time_ = now;
    sample_count_ = 1;
    return;
  }
  const Micros interval = now - *last_time_;
  last_time_ = now;
  if (interval.value() <= 0) return;

  const double interval_s = ToSeconds(interval).value();
  if (sample_count_ == 1) {
    avg_interval_s_ = interval_s;
  } else {
    avg_interval_s_ = gain_ * avg_interval_s_ + (1.0 - gain_) * interval_s;
  }
  avg_length_bits_ = gain_ * avg_length_bits_ + (1.0 - gain_) * length_bits;
  ++sample_count_;
}

Rate EwmaRateFilter::rate() const {
  if (sample_count_ < 2 || avg_interval_s_ <= 0.0) return Rate(0.0);
  return RateOf(avg_length_bits_, Seconds(avg_interval_s_));
}

BandwidthEstimator::BandwidthEstimator(double gain) : send_(gain), ack_(gain) {}

void BandwidthEstimator::RecordSend(Bytes packet_size, SimTime now) {
  send_.AddSample(static_cast<double>(BitsOf(packet_size).value()), now);
}

void BandwidthEstimator::RecordAck(std::int64_t acked, Bytes packet_size,
                                   SimTime now) {
  if (acked < 1) throw std::invalid_argument("RecordAck: acked must be >= 1");
  RecordAckBytes(Bytes(acked * packet_size.value()), now);
}

void BandwidthEstimator::RecordAckBytes(Bytes covered, SimTime now) {
  ack_.AddSample(static_cast<double>(BitsOf(covered).value()), now);
}

}  // namespace ubtcp
