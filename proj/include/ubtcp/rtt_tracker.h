#ifndef UBTCP_RTT_TRACKER_H_
#define UBTCP_RTT_TRACKER_H_

#include <optional>

#include "ubtcp/units.h"

namespace ubtcp {

struct RttSample {
  Seconds rtt;
  SimTime at;
};

struct RttTrackerConfig {
  Seconds rto_min{0.2};
  Seconds rto_max{60.0};
  Seconds rto_initial{1.0};
};

// Minimum, smoothed and variance RTT plus the retransmission timeout derived
// from them (RFC 6298 gains). Samples from retransmitted segments must not be
// fed in.
class RttTracker {
 public:
  explicit RttTracker(RttTrackerConfig config = {});

  // Throws std::invalid_argument for a nonpositive rtt.
  void Update(const RttSample& sample);

  // Timer expiry: doubles rto, capped at rto_max.
  void Backoff();

  // Minimum observed RTT; unset until the first sample. Also serves as
  // RTT_min for the loss reactions.
  std::optional<Seconds> base_rtt() const { return base_rtt_; }
  Seconds last_rtt() const { return last_rtt_; }
  Seconds srtt() const { return srtt_; }
  Seconds rttvar() const { return rttvar_; }
  Seconds rto() const { return rto_; }
  int backoff() const { return backoff_; }
  bool has_sample() const { return base_rtt_.has_value(); }
  const RttTrackerConfig& config() const { return config_; }

 private:
  Seconds Clamp(Seconds s) const;

  RttTrackerConfig config_;
  std::optional<Seconds> base_rtt_;
  Seconds last_rtt_{0.0};
  Seconds srtt_{0.0};
  Seconds rttvar_{0.0};
  Seconds rto_;
  int backoff_ = 0;
};

}  // namespace ubtcp

#endif  // UBTCP_RTT_TRACKER_H_
