#include "ubtcp/congestion_controller.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ubtcp {

namespace {

constexpr Segments kMinCwnd{1};
constexpr Segments kMinSsthresh{2};
constexpr int kDupAckThreshold = 3;

Seconds BaseRttOrZero(const RttTracker& rtt) {
  return rtt.base_rtt().value_or(Seconds(0.0));
}

}  // namespace

void ControllerConfig::Validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("controller.alpha must be >= 0");
  if (!(gamma >= alpha)) {
    throw std::invalid_argument("controller.gamma must be >= controller.alpha");
  }
  if (!(beta >= gamma)) {
    throw std::invalid_argument("controller.beta must be >= controller.gamma");
  }
  if (seg_size.value() <= 0) {
    throw std::invalid_argument("controller.seg_size must be > 0");
  }
  if (initial_cwnd < kMinCwnd) {
    throw std::invalid_argument("controller.initial_cwnd must be >= 1");
  }
  if (initial_ssthresh < kMinSsthresh) {
    throw std::invalid_argument("controller.initial_ssthresh must be >= 2");
  }
  if (!(ewma_gain >= 0.0 && ewma_gain < 1.0)) {
    throw std::invalid_argument("controller.ewma_gain must be in [0, 1)");
  }
}

std::string_view ToString(ControllerAction action) {
  switch (action) {
    case ControllerAction::kIncrease: return "increase";
    case ControllerAction::kRecalibrate: return "recalibrate";
    case ControllerAction::kReset: return "reset";
    case ControllerAction::kDecrease: return "decrease";
    case ControllerAction::kHold: return "hold";
  }
  return "unknown";
}

std::string_view ToString(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kUb: return "ub";
    case ControllerKind::kVegas: return "vegas";
    case ControllerKind::kWestwood: return "westwood";
  }
  return "unknown";
}

ControllerKind ParseControllerKind(std::string_view name) {
  if (name == "ub") return ControllerKind::kUb;
  if (name == "vegas") return ControllerKind::kVegas;
  if (name == "westwood") return ControllerKind::kWestwood;
  throw std::invalid_argument("unknown controller '" + std::string(name) +
                              "' (expected ub, vegas or westwood)");
}

double VegasDiff(Segments cwnd, Seconds base_rtt, Seconds rtt) {
  if (!(base_rtt.value() > 0.0)) {
    throw std::invalid_argument("VegasDiff: base_rtt must be positive");
  }
  rtt = std::max(rtt, base_rtt);
  const double w = static_cast<double>(cwnd.value());
  const double expected = w / base_rtt.value();
  const double actual = w / rtt.value();
  return std::max(0.0, (expected - actual) * base_rtt.value());
}

ControllerAction Decide(double diff, const ControllerConfig& cfg,
                        bool timeout_expired) {
  if (diff < cfg.alpha) return ControllerAction::kIncrease;
  if (diff >= cfg.gamma && diff <= cfg.beta) return ControllerAction::kRecalibrate;
  if (timeout_expired) return ControllerAction::kReset;
  if (diff > cfg.beta) return ControllerAction::kDecrease;
  return ControllerAction::kHold;
}

Segments EstimatedSsthresh(Rate bwe, Seconds rtt, Bytes seg_size) {
  const double segs = bwe.value() * rtt.value() /
                      static_cast<double>(BitsOf(seg_size).value());
  if (!(segs >= 2.0)) return kMinSsthresh;
  // Guard against absurd estimates overflowing the integer window.
  const double capped = std::min(std::floor(segs), 1e12);
  return Segments(static_cast<std::int64_t>(capped));
}

CcState Apply(CcState state, ControllerAction action, Rate bwe,
              Seconds base_rtt, const ControllerConfig& cfg) {
  switch (action) {
    case ControllerAction::kIncrease:
      state.cwnd += Segments(1);
      break;
    case ControllerAction::kRecalibrate:
      state.ssthresh = EstimatedSsthresh(bwe, base_rtt, cfg.seg_size);
      if (state.cwnd > state.ssthresh) state.cwnd = state.ssthresh;
      break;
    case ControllerAction::kReset:
      state.cwnd = kMinCwnd;
      state.ssthresh = EstimatedSsthresh(bwe, base_rtt, cfg.seg_size);
      break;
    case ControllerAction::kDecrease:
      state.cwnd = std::max(kMinCwnd, state.cwnd - Segments(1));
      break;
    case ControllerAction::kHold:
      break;
  }
  return state;
}

CcState VegasAdjust(CcState state, double diff, const ControllerConfig& cfg) {
  if (diff < cfg.alpha) {
    state.cwnd += Segments(1);
  } else if (diff > cfg.beta) {
    state.cwnd = std::max(kMinCwnd, state.cwnd - Segments(1));
  }
  return state;
}

CongestionController::CongestionController(const ControllerConfig& cfg)
    : cfg_(cfg) {
  cfg_.Validate();
  state_.cwnd = cfg_.initial_cwnd;
  state_.ssthresh = cfg_.initial_ssthresh;
}

bool CongestionController::SlowStartStep() {
  if (state_.phase() != Phase::kSlowStart) return false;
  state_.cwnd += Segments(1);
  return true;
}

bool CongestionController::DecisionDue(SimTime now, Seconds base_rtt) {
  if (next_decision_at_ && now < *next_decision_at_) return false;
  next_decision_at_ = now + ToMicros(base_rtt);
  return true;
}

std::optional<DecisionRecord> UbController::OnAck(
    const AckInfo& ack, const RttTracker& rtt, const BandwidthEstimator& bwe) {
  state_.dup_ack_count = 0;
  if (SlowStartStep()) return std::nullopt;
  const auto base = rtt.base_rtt();
  if (!base) return std::nullopt;
  if (!DecisionDue(ack.now, *base)) return std::nullopt;

  const Seconds current = ack.sample ? ack.sample->rtt : rtt.last_rtt();
  const double diff = VegasDiff(state_.cwnd, *base, current);
  const ControllerAction action = Decide(diff, cfg_, /*timeout_expired=*/false);
  state_ = Apply(state_, action, bwe.current_bwe(), *base, cfg_);
  last_decision_ = DecisionRecord{ack.now, diff, action, state_.cwnd,
                                  state_.ssthresh, bwe.current_bwe()};
  return last_decision_;
}

bool UbController::OnDupAck(const RttTracker& rtt,
                            const BandwidthEstimator& bwe) {
  ++state_.dup_ack_count;
  if (state_.dup_ack_count != kDupAckThreshold) return false;
  state_.ssthresh =
      EstimatedSsthresh(bwe.current_bwe(), BaseRttOrZero(rtt), cfg_.seg_size);
  if (state_.cwnd > state_.ssthresh) state_.cwnd = state_.ssthresh;
  return true;
}

void UbController::OnTimeout(const RttTracker& rtt,
                             const BandwidthEstimator& bwe) {
  state_ = Apply(state_, ControllerAction::kReset, bwe.current_bwe(),
                 BaseRttOrZero(rtt), cfg_);
  state_.dup_ack_count = 0;
}

std::optional<DecisionRecord> VegasController::OnAck(
    const AckInfo& ack, const RttTracker& rtt, const BandwidthEstimator& bwe) {
  state_.dup_ack_count = 0;
  if (SlowStartStep()) return std::nullopt;
  const auto base = rtt.base_rtt();
  if (!base) return std::nullopt;
  if (!DecisionDue(ack.now, *base)) return std::nullopt;

  const Seconds current = ack.sample ? ack.sample->rtt : rtt.last_rtt();
  const double diff = VegasDiff(state_.cwnd, *base, current);
  const Segments before = state_.cwnd;
  state_ = VegasAdjust(state_, diff, cfg_);
  ControllerAction action = ControllerAction::kHold;
  if (state_.cwnd > before) {
    action = ControllerAction::kIncrease;
  } else if (diff > cfg_.beta) {
    action = ControllerAction::kDecrease;
  }
  last_decision_ = DecisionRecord{ack.now, diff, action, state_.cwnd,
                                  state_.ssthresh, bwe.current_bwe()};
  return last_decision_;
}

bool VegasController::OnDupAck(const RttTracker&, const BandwidthEstimator&) {
  ++state_.dup_ack_count;
  if (state_.dup_ack_count != kDupAckThreshold) return false;
  state_.ssthresh = std::max(kMinSsthresh, Segments(state_.cwnd.value() / 2));
  state_.cwnd = state_.ssthresh;
  return true;
}

void VegasController::OnTimeout(const RttTracker&, const BandwidthEstimator&) {
  state_.ssthresh = std::max(kMinSsthresh, Segments(state_.cwnd.value() / 2));
  state_.cwnd = kMinCwnd;
  state_.dup_ack_count = 0;
}

std::optional<DecisionRecord> WestwoodController::OnAck(
    const AckInfo& ack, const RttTracker&, const BandwidthEstimator&) {
  state_.dup_ack_count = 0;
  if (SlowStartStep()) {
    acked_in_window_ = 0;
    return std::nullopt;
  }
  acked_in_window_ += ack.newly_acked;
  if (acked_in_window_ >= state_.cwnd.value()) {
    acked_in_window_ -= state_.cwnd.value();
    state_.cwnd += Segments(1);
  }
  return std::nullopt;
}

bool WestwoodController::OnDupAck(const RttTracker& rtt,
                                  const BandwidthEstimator& bwe) {
  ++state_.dup_ack_count;
  if (state_.dup_ack_count != kDupAckThreshold) return false;
  state_.ssthresh =
      EstimatedSsthresh(bwe.current_bwe(), BaseRttOrZero(rtt), cfg_.seg_size);
  if (state_.cwnd > state_.ssthresh) state_.cwnd = state_.ssthresh;
  acked_in_window_ = 0;
  return true;
}

void WestwoodController::OnTimeout(const RttTracker& rtt,
                                   const BandwidthEstimator& bwe) {
  state_.ssthresh =
      EstimatedSsthresh(bwe.current_bwe(), BaseRttOrZero(rtt), cfg_.seg_size);
  state_.cwnd = kMinCwnd;
  state_.dup_ack_count = 0;
  acked_in_window_ = 0;
}

std::unique_ptr<CongestionController> MakeController(
    ControllerKind kind, const ControllerConfig& cfg) {
  switch (kind) {
    case ControllerKind::kUb: return std::make_unique<UbController>(cfg);
    case ControllerKind::kVegas: return std::make_unique<VegasController>(cfg);
    case ControllerKind::kWestwood:
      return std::make_unique<WestwoodController>(cfg);
  }
  throw std::invalid_argument("MakeController: bad kind");
}

}  // namespace ubtcp
