#include "ubtcp/rtt_tracker.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ubtcp {

namespace {
constexpr double kSrttGain = 0.125;
constexpr double kRttvarGain = 0.25;
}  // namespace

RttTracker::RttTracker(RttTrackerConfig config)
    : config_(config), rto_(config.rto_initial) {
  if (!(config_.rto_min.value() > 0.0) || config_.rto_max < config_.rto_min) {
    throw std::invalid_argument("RttTracker: need 0 < rto_min <= rto_max");
  }
  rto_ = Clamp(rto_);
}

Seconds RttTracker::Clamp(Seconds s) const {
  return std::clamp(s, config_.rto_min, config_.rto_max);
}

void RttTracker::Update(const RttSample& sample) {
  const double r = sample.rtt.value();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("RttTracker::Update: rtt must be positive");
  }
  if (!base_rtt_) {
    base_rtt_ = sample.rtt;
    srtt_ = sample.rtt;
    rttvar_ = Seconds(r / 2.0);
  } else {
    base_rtt_ = std::min(*base_rtt_, sample.rtt);
    rttvar_ = Seconds((1.0 - kRttvarGain) * rttvar_.value() +
                      kRttvarGain * std::abs(srtt_.value() - r));
    srtt_ = Seconds((1.0 - kSrttGain) * srtt_.value() + kSrttGain * r);
  }
  last_rtt_ = sample.rtt;
  rto_ = Clamp(Seconds(srtt_.value() + 4.0 * rttvar_.value()));
  backoff_ = 0;
}

void RttTracker::Backoff() {
  rto_ = Clamp(rto_ * 2.0);
  ++backoff_;
}

}  // namespace ubtcp
