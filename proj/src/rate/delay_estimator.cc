#include "rtcnetlab/rate/delay_estimator.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rtcnetlab {

namespace {

constexpr size_t kGroupRateWindow = 60;

}  // namespace

ScalarKalman::ScalarKalman(const KalmanConfig& config)
    : config_(config), e_(config.initial_error), var_v_(config.initial_noise_var) {}

double ScalarKalman::Update(double d_ms, double group_rate_hz) {
  const double e_pred = e_ + config_.process_noise;
  const double z = d_ms - m_;
  const double alpha =
      std::pow(1.0 - config_.chi, 30.0 / (1000.0 * std::max(group_rate_hz, 1e-3)));
  const double bound = 3.0 * std::sqrt(var_v_);
  const double z_clamped = std::clamp(z, -bound, bound);
  var_v_ = std::max(alpha * var_v_ + (1.0 - alpha) * z_clamped * z_clamped,
                    config_.min_noise_var);
  const double k = e_pred / (var_v_ + e_pred);
  m_ += k * z;
  e_ = (1.0 - k) * e_pred;
  return m_;
}

DelayEstimator::DelayEstimator(SimDuration group_window_us, const KalmanConfig& config)
    : group_window_us_(group_window_us), filter_(config) {
  if (group_window_us_ <= 0) throw ConfigError("delay group window must be > 0");
}

double DelayEstimator::GroupRateHz() const {
  if (recent_send_deltas_.empty()) return 200.0;
  const double sum = std::accumulate(recent_send_deltas_.begin(),
                                     recent_send_deltas_.end(), 0.0);
  const double mean_us = std::max(sum / recent_send_deltas_.size(), 1000.0);
  return 1e6 / mean_us;
}

std::optional<DelayUpdate> DelayEstimator::OnPacket(SimTime send_time, SimTime arrival) {
  if (current_ && send_time - current_->first_send <= group_window_us_) {
    current_->last_send = std::max(current_->last_send, send_time);
    current_->last_arrival = std::max(current_->last_arrival, arrival);
    return std::nullopt;
  }
  std::optional<DelayUpdate> update;
  if (current_ && previous_) {
    const SimDuration send_delta = current_->last_send - previous_->last_send;
    const SimDuration arrival_delta = current_->last_arrival - previous_->last_arrival;
    recent_send_deltas_.push_back(send_delta);
    if (recent_send_deltas_.size() > kGroupRateWindow) recent_send_deltas_.pop_front();
    num_deltas_ = std::min<int>(num_deltas_ + 1, static_cast<int>(kGroupRateWindow));
    DelayUpdate out;
    out.d_ms = static_cast<double>(arrival_delta - send_delta) / 1000.0;
    out.send_delta_ms = static_cast<double>(send_delta) / 1000.0;
    out.m_ms = filter_.Update(out.d_ms, GroupRateHz());
    out.num_deltas = num_deltas_;
    update = out;
  }
  if (current_) previous_ = current_;
  current_ = Group{send_time, send_time, arrival};
  return update;
}

}  // namespace rtcnetlab
