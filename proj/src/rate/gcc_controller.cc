#include "rtcnetlab/rate/gcc_controller.h"

#include <algorithm>

namespace rtcnetlab {

void GccConfig::Validate() const {
  if (min_rate_bps <= 0 || min_rate_bps > max_rate_bps) {
    throw ConfigError("controller rate bounds must satisfy 0 < min <= max");
  }
  if (start_rate_bps < min_rate_bps || start_rate_bps > max_rate_bps) {
    throw ConfigError("controller.start_rate_bps must lie within the rate bounds");
  }
  if (group_window_us <= 0 || rate_window_us <= 0 || loss_window_us <= 0) {
    throw ConfigError("GCC windows must be > 0");
  }
  if (detector_gain_cap < 1) throw ConfigError("GCC detector gain cap must be >= 1");
  if (overuse.initial_threshold_ms <= 0 || overuse.k_up < 0 || overuse.k_down < 0) {
    throw ConfigError("GCC detector constants must be positive");
  }
  if (aimd.beta <= 0 || aimd.beta >= 1) throw ConfigError("GCC beta must lie in (0, 1)");
  if (aimd.increase_factor < 1) throw ConfigError("GCC increase factor must be >= 1");
}

GccController::GccController(const GccConfig& config)
    : config_((config.Validate(), config)),
      estimator_(config.group_window_us, config.kalman),
      detector_(config.overuse),
      aimd_(config.aimd, config.start_rate_bps, config.min_rate_bps, config.max_rate_bps),
      rtt_(config.initial_rtt_us) {}

std::optional<double> GccController::incoming_rate_bps() const {
  if (acked_.empty() || !first_ack_) return std::nullopt;
  const SimDuration span =
      std::min(config_.rate_window_us, acked_.back().first - *first_ack_);
  if (span < config_.rate_window_us / 2) return std::nullopt;
  return static_cast<double>(acked_bytes_in_window_) * 8e6 / static_cast<double>(span);
}

double GccController::loss_fraction() const {
  int64_t lost = 0;
  int64_t received = 0;
  for (const LossSample& sample : loss_) {
    lost += sample.lost;
    received += sample.received;
  }
  if (lost + received == 0) return 0.0;
  return static_cast<double>(lost) / static_cast<double>(lost + received);
}

void GccController::OnTransportFeedback(const std::vector<PacketResult>& results,
                                        SimTime now) {
  has_feedback_ = true;
  LossSample sample{now, 0, 0};
  bool saw_overuse = false;
  bool saw_update = false;
  for (const PacketResult& result : results) {
    if (result.status == PacketResult::Status::kLost) ++sample.lost;
    if (result.status != PacketResult::Status::kReceived) continue;
    ++sample.received;
    if (!first_ack_) first_ack_ = result.arrival;
    acked_.emplace_back(result.arrival, result.sent.size_bytes);
    acked_bytes_in_window_ += result.sent.size_bytes;
    if (auto update = estimator_.OnPacket(result.sent.send_time, result.arrival)) {
      const double scaled =
          update->m_ms * std::min(update->num_deltas, config_.detector_gain_cap);
      if (detector_.Detect(scaled, update->send_delta_ms, now) == BandwidthUsage::kOveruse) {
        saw_overuse = true;
      }
      saw_update = true;
    }
  }
  if (!acked_.empty()) {
    const SimTime newest =
        std::max_element(acked_.begin(), acked_.end())->first;
    while (!acked_.empty() && acked_.front().first <= newest - config_.rate_window_us) {
      acked_bytes_in_window_ -= acked_.front().second;
      acked_.pop_front();
    }
  }
  loss_.push_back(sample);
  while (!loss_.empty() && loss_.front().time <= now - config_.loss_window_us) {
    loss_.pop_front();
  }
  if (!saw_update) return;
  const BandwidthUsage usage = saw_overuse ? BandwidthUsage::kOveruse : detector_.state();
  const uint64_t before = aimd_.decreases();
  aimd_.Update(usage, incoming_rate_bps(), rtt_, now);
  if (aimd_.decreases() != before) decrease_times_.push_back(now);
}

void GccController::OnReceiverReport(const ReceiverReport& report,
                                     std::optional<SimDuration> rtt, SimTime now) {
  if (rtt) rtt_ = *rtt;
}

RateDecision GccController::Decide(SimTime now) {
  RateDecision decision;
  if (!has_feedback_) {
    decision.target_bps = config_.start_rate_bps;
    decision.region = RateRegion::kHold;
    return decision;
  }
  const double loss_based = LossBasedRate(aimd_.estimate(), loss_fraction(),
                                          static_cast<double>(config_.max_rate_bps));
  decision.target_bps =
      ClampBitrate(loss_based, config_.min_rate_bps, config_.max_rate_bps);
  decision.region = aimd_.region();
  return decision;
}

}  // namespace rtcnetlab
