#ifndef UBTCP_CONGESTION_CONTROLLER_H_
#define UBTCP_CONGESTION_CONTROLLER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "ubtcp/bandwidth_estimator.h"
#include "ubtcp/rtt_tracker.h"
#include "ubtcp/units.h"

namespace ubtcp {

// Diff thresholds are in segments and may be fractional.
struct ControllerConfig {
  double alpha = 1.0;
  double gamma = 2.0;
  double beta = 3.0;
  Bytes seg_size{1040};
  Segments initial_cwnd{2};
  Segments initial_ssthresh{32};
  double ewma_gain = BandwidthEstimator::kDefaultGain;

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

enum class Phase { kSlowStart, kCongestionAvoidance };

struct CcState {
  Segments cwnd{2};
  Segments ssthresh{32};
  int dup_ack_count = 0;

  Phase phase() const {
    return cwnd < ssthresh ? Phase::kSlowStart : Phase::kCongestionAvoidance;
  }
  friend bool operator==(const CcState&, const CcState&) = default;
};

enum class ControllerAction { kIncrease, kRecalibrate, kReset, kDecrease, kHold };

std::string_view ToString(ControllerAction action);

// One congestion-avoidance decision, kept for traces.
struct DecisionRecord {
  SimTime at;
  double diff = 0.0;
  ControllerAction action = ControllerAction::kHold;
  Segments cwnd;
  Segments ssthresh;
  Rate bwe;
};

// Backlog estimate in (fractional) segments:
//   (cwnd/base_rtt - cwnd/rtt) * base_rtt = cwnd * (1 - base_rtt/rtt).
// rtt below base_rtt is clamped to base_rtt. Throws std::invalid_argument for
// a nonpositive base_rtt.
double VegasDiff(Segments cwnd, Seconds base_rtt, Seconds rtt);

// The three-threshold decision, checked in this order:
//   diff < alpha               -> Increase
//   gamma <= diff <= beta      -> Recalibrate
//   timeout_expired            -> Reset
//   diff > beta                -> Decrease
//   otherwise                  -> Hold
ControllerAction Decide(double diff, const ControllerConfig& cfg,
                        bool timeout_expired);

// max(2, floor(bwe * rtt / (seg_size * 8))).
Segments EstimatedSsthresh(Rate bwe, Seconds rtt, Bytes seg_size);

CcState Apply(CcState state, ControllerAction action, Rate bwe,
              Seconds base_rtt, const ControllerConfig& cfg);

// Two-threshold Vegas adjustment: +1 below alpha, -1 above beta, else hold.
CcState VegasAdjust(CcState state, double diff, const ControllerConfig& cfg);

struct AckInfo {
  SimTime now;
  // Absent when the ACK was triggered by a retransmitted segment.
  std::optional<RttSample> sample;
  std::int64_t newly_acked = 1;
};

// How the transport repairs a loss signalled by three duplicate ACKs.
enum class RecoveryStyle {
  // Retransmit the missing segment only.
  kLostSegmentOnly,
  // Resend everything from the oldest unacknowledged segment.
  kGoBackN,
};

enum class ControllerKind { kUb, kVegas, kWestwood };

std::string_view ToString(ControllerKind kind);
// Accepts "ub", "vegas", "westwood". Throws std::invalid_argument otherwise.
ControllerKind ParseControllerKind(std::string_view name);

class CongestionController {
 public:
  explicit CongestionController(const ControllerConfig& cfg);
  virtual ~CongestionController() = default;

  CongestionController(const CongestionController&) = delete;
  CongestionController& operator=(const CongestionController&) = delete;

  virtual ControllerKind kind() const = 0;
  virtual RecoveryStyle recovery_style() const {
    return RecoveryStyle::kLostSegmentOnly;
  }

  // A cumulative ACK that advanced the left window edge. Returns the
  // congestion-avoidance decision if one was taken on this ACK.
  virtual std::optional<DecisionRecord> OnAck(const AckInfo& ack,
                                              const RttTracker& rtt,
                                              const BandwidthEstimator& bwe) = 0;

  // One duplicate ACK. Returns true exactly when the missing segment should
  // be fast-retransmitted (on the third duplicate).
  virtual bool OnDupAck(const RttTracker& rtt,
                        const BandwidthEstimator& bwe) = 0;

  virtual void OnTimeout(const RttTracker& rtt,
                         const BandwidthEstimator& bwe) = 0;

  const CcState& state() const { return state_; }
  const ControllerConfig& config() const { return cfg_; }
  const std::optional<DecisionRecord>& last_decision() const {
    return last_decision_;
  }

 protected:
  // Slow-start growth shared by every variant. Returns false when in
  // congestion avoidance and nothing was done.
  bool SlowStartStep();
  // True at most once per base RTT.
  bool DecisionDue(SimTime now, Seconds base_rtt);

  ControllerConfig cfg_;
  CcState state_;
  std::optional<DecisionRecord> last_decision_;

 private:
  std::optional<SimTime> next_decision_at_;
};

// Three-threshold controller with bandwidth-estimate driven ssthresh.
class UbController : public CongestionController {
 public:
  using CongestionController::CongestionController;

  ControllerKind kind() const override { return ControllerKind::kUb; }
  std::optional<DecisionRecord> OnAck(const AckInfo& ack, const RttTracker& rtt,
                                      const BandwidthEstimator& bwe) override;
  bool OnDupAck(const RttTracker& rtt, const BandwidthEstimator& bwe) override;
  void OnTimeout(const RttTracker& rtt, const BandwidthEstimator& bwe) override;
};

class VegasController : public CongestionController {
 public:
  using CongestionController::CongestionController;

  ControllerKind kind() const override { return ControllerKind::kVegas; }
  std::optional<DecisionRecord> OnAck(const AckInfo& ack, const RttTracker& rtt,
                                      const BandwidthEstimator& bwe) override;
  bool OnDupAck(const RttTracker& rtt, const BandwidthEstimator& bwe) override;
  void OnTimeout(const RttTracker& rtt, const BandwidthEstimator& bwe) override;
};

// Reno-style growth; loss reactions reset ssthresh from the bandwidth
// estimate and resend from the oldest unacknowledged segment.
class WestwoodController : public CongestionController {
 public:
  using CongestionController::CongestionController;

  ControllerKind kind() const override { return ControllerKind::kWestwood; }
  RecoveryStyle recovery_style() const override {
    return RecoveryStyle::kGoBackN;
  }
  std::optional<DecisionRecord> OnAck(const AckInfo& ack, const RttTracker& rtt,
                                      const BandwidthEstimator& bwe) override;
  bool OnDupAck(const RttTracker& rtt, const BandwidthEstimator& bwe) override;
  void OnTimeout(const RttTracker& rtt, const BandwidthEstimator& bwe) override;

 private:
  std::int64_t acked_in_window_ = 0;
};

std::unique_ptr<CongestionController> MakeController(
    ControllerKind kind, const ControllerConfig& cfg);

}  // namespace ubtcp

#endif  // UBTCP_CONGESTION_CONTROLLER_H_
