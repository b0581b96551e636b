#ifndef RTCNETLAB_RATE_DELAY_ESTIMATOR_H_
#define RTCNETLAB_RATE_DELAY_ESTIMATOR_H_

#include <cstdint>
#include <deque>
#include <optional>

#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

struct KalmanConfig {
  // Process noise added to the estimate error each update (ms^2).
  double process_noise = 1e-3;
  double initial_error = 0.1;
  double initial_noise_var = 50.0;
  // Forgetting factor base for the measurement-noise estimate.
  double chi = 0.01;
  double min_noise_var = 1.0;
};

// Scalar Kalman filter tracking the delay gradient m (ms per group) from
// per-group delay variations d. The measurement noise variance is estimated
// online from the innovations, clamped at 3 sigma for outliers.
class ScalarKalman {
 public:
  explicit ScalarKalman(const KalmanConfig& config = {});

  // `group_rate_hz` scales the noise forgetting factor to the group rate.
  double Update(double d_ms, double group_rate_hz);

  double estimate() const { return m_; }
  double error() const { return e_; }
  double noise_var() const { return var_v_; }

 private:
  KalmanConfig config_;
  double m_ = 0.0;
  double e_;
  double var_v_;
};

struct DelayUpdate {
  // Delay variation between the last two completed groups.
  double d_ms = 0.0;
  double m_ms = 0.0;
  // Inter-departure time of those groups.
  double send_delta_ms = 0.0;
  int num_deltas = 0;
};

// Groups packets into departure bursts no longer than `group_window_us` and
// feeds the filter one sample per pair of completed groups.
class DelayEstimator {
 public:
  explicit DelayEstimator(SimDuration group_window_us = 5000,
                          const KalmanConfig& config = {});

  // Packets must be fed in transport sequence order.
  std::optional<DelayUpdate> OnPacket(SimTime send_time, SimTime arrival);

  const ScalarKalman& filter() const { return filter_; }
  int num_deltas() const { return num_deltas_; }

 private:
  struct Group {
    SimTime first_send = 0;
    SimTime last_send = 0;
    SimTime last_arrival = 0;
  };

  double GroupRateHz() const;

  SimDuration group_window_us_;
  ScalarKalman filter_;
  std::optional<Group> current_;
  std::optional<Group> previous_;
  std::deque<SimDuration> recent_send_deltas_;
  int num_deltas_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RATE_DELAY_ESTIMATOR_H_
