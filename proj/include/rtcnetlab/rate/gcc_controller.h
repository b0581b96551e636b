#ifndef RTCNETLAB_RATE_GCC_CONTROLLER_H_
#define RTCNETLAB_RATE_GCC_CONTROLLER_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "rtcnetlab/rate/aimd.h"
#include "rtcnetlab/rate/delay_estimator.h"
#include "rtcnetlab/rate/overuse_detector.h"
#include "rtcnetlab/rate/rate_controller.h"

namespace rtcnetlab {

struct GccConfig {
  int64_t start_rate_bps = 1000000;
  int64_t min_rate_bps = kMinBitrateBps;
  int64_t max_rate_bps = kMaxBitrateBps;
  SimDuration group_window_us = 5000;
  // Window for the acknowledged incoming rate R.
  SimDuration rate_window_us = Millis(500);
  // Window for the loss fraction fed to the loss-based stage.
  SimDuration loss_window_us = Seconds(1);
  // The detector compares m times min(groups seen, this) with the
  // threshold, so the threshold is in accumulated-gradient units.
  int detector_gain_cap = 60;
  // RTT assumed before the first receiver report.
  SimDuration initial_rtt_us = Millis(100);
  KalmanConfig kalman;
  OveruseConfig overuse;
  AimdConfig aimd;

  void Validate() const;
};

// Delay-based estimate (Kalman filter + overuse detector + AIMD) followed by
// the loss-based stage, clamped to [min_rate, max_rate].
class GccController : public RateController {
 public:
  explicit GccController(const GccConfig& config);

  void OnTransportFeedback(const std::vector<PacketResult>& results, SimTime now) override;
  void OnReceiverReport(const ReceiverReport& report, std::optional<SimDuration> rtt,
                        SimTime now) override;
  RateDecision Decide(SimTime now) override;
  std::string_view name() const override { return "gcc"; }

  std::optional<double> incoming_rate_bps() const;
  double loss_fraction() const;
  const DelayEstimator& estimator() const { return estimator_; }
  const OveruseDetector& detector() const { return detector_; }
  const AimdRateControl& aimd() const { return aimd_; }
  const std::vector<SimTime>& decrease_times() const { return decrease_times_; }

 private:
  struct LossSample {
    SimTime time = 0;
    int64_t lost = 0;
    int64_t received = 0;
  };

  GccConfig config_;
  DelayEstimator estimator_;
  OveruseDetector detector_;
  AimdRateControl aimd_;
  bool has_feedback_ = false;
  SimDuration rtt_;
  // (arrival, bytes) of acknowledged packets.
  std::deque<std::pair<SimTime, int64_t>> acked_;
  int64_t acked_bytes_in_window_ = 0;
  std::optional<SimTime> first_ack_;
  std::deque<LossSample> loss_;
  std::vector<SimTime> decrease_times_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RATE_GCC_CONTROLLER_H_
