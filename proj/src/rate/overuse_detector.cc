#include "rtcnetlab/rate/overuse_detector.h"

#include <algorithm>
#include <cmath>

namespace rtcnetlab {

std::string_view BandwidthUsageName(BandwidthUsage usage) {
  switch (usage) {
    case BandwidthUsage::kNormal:
      return "normal";
    case BandwidthUsage::kOveruse:
      return "overuse";
    case BandwidthUsage::kUnderuse:
      return "underuse";
  }
  return "unknown";
}

OveruseDetector::OveruseDetector(const OveruseConfig& config)
    : config_(config), threshold_(config.initial_threshold_ms) {}

BandwidthUsage OveruseDetector::Detect(double m_ms, double send_delta_ms, SimTime now) {
  if (m_ms > threshold_) {
    if (time_over_using_ < 0) {
      time_over_using_ = send_delta_ms / 2;
    } else {
      time_over_using_ += send_delta_ms;
    }
    ++overuse_counter_;
    if (time_over_using_ >= config_.overuse_time_ms && overuse_counter_ > 1) {
      time_over_using_ = 0;
      overuse_counter_ = 0;
      state_ = BandwidthUsage::kOveruse;
    }
  } else if (m_ms < -threshold_) {
    time_over_using_ = -1;
    overuse_counter_ = 0;
    state_ = BandwidthUsage::kUnderuse;
  } else {
    time_over_using_ = -1;
    overuse_counter_ = 0;
    state_ = BandwidthUsage::kNormal;
  }
  UpdateThreshold(m_ms, now);
  return state_;
}

void OveruseDetector::UpdateThreshold(double m_ms, SimTime now) {
  if (!last_update_) last_update_ = now;
  const double abs_m = std::fabs(m_ms);
  if (abs_m > threshold_ + config_.max_adapt_offset_ms) {
    last_update_ = now;
    return;
  }
  const double k = abs_m < threshold_ ? config_.k_down : config_.k_up;
  const double dt_ms =
      std::min(static_cast<double>(now - *last_update_) / 1000.0, config_.max_adapt_dt_ms);
  threshold_ += k * (abs_m - threshold_) * dt_ms;
  threshold_ = std::clamp(threshold_, config_.min_threshold_ms, config_.max_threshold_ms);
  last_update_ = now;
}

}  // namespace rtcnetlab
