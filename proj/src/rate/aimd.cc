#include "rtcnetlab/rate/aimd.h"

#include <algorithm>
#include <cmath>

namespace rtcnetlab {

std::string_view RateRegionName(RateRegion region) {
  switch (region) {
    case RateRegion::kHold:
      return "hold";
    case RateRegion::kIncrease:
      return "increase";
    case RateRegion::kDecrease:
      return "decrease";
  }
  return "unknown";
}

AimdRateControl::AimdRateControl(const AimdConfig& config, int64_t start_bps,
                                 int64_t min_bps, int64_t max_bps)
    : config_(config),
      rate_(static_cast<double>(start_bps)),
      min_bps_(min_bps),
      max_bps_(max_bps) {}

double AimdRateControl::CapacitySigmaBps() const {
  if (!capacity_avg_) return 0.0;
  return std::sqrt(capacity_var_ * *capacity_avg_ / 1000.0) * 1000.0;
}

bool AimdRateControl::NearCapacity() const {
  if (!capacity_avg_) return false;
  return std::fabs(rate_ - *capacity_avg_) <= 3 * CapacitySigmaBps();
}

void AimdRateControl::UpdateCapacity(double incoming_bps) {
  const double kbps = incoming_bps / 1000.0;
  if (!capacity_avg_) {
    capacity_avg_ = incoming_bps;
    return;
  }
  double avg = *capacity_avg_ / 1000.0;
  const double a = config_.capacity_smoothing;
  avg = (1 - a) * avg + a * kbps;
  const double norm = std::max(avg, 1.0);
  capacity_var_ = (1 - a) * capacity_var_ + a * (avg - kbps) * (avg - kbps) / norm;
  capacity_var_ = std::clamp(capacity_var_, 0.4, 2.5);
  capacity_avg_ = avg * 1000.0;
}

double AimdRateControl::Update(BandwidthUsage usage, std::optional<double> incoming_bps,
                               SimDuration rtt, SimTime now) {
  const SimDuration dt = last_update_ ? now - *last_update_ : 0;
  last_update_ = now;
  switch (usage) {
    case BandwidthUsage::kOveruse:
      region_ = RateRegion::kDecrease;
      break;
    case BandwidthUsage::kUnderuse:
      region_ = RateRegion::kHold;
      break;
    case BandwidthUsage::kNormal:
      region_ = RateRegion::kIncrease;
      break;
  }

  // A capacity estimate far from the current rate is stale.
  if (incoming_bps && capacity_avg_) {
    if (*incoming_bps > *capacity_avg_ + 3 * CapacitySigmaBps()) capacity_avg_.reset();
  }

  if (region_ == RateRegion::kIncrease) {
    const double dt_s = std::min(static_cast<double>(dt) / 1e6, 1.0);
    double next = rate_;
    if (capacity_avg_ && NearCapacity()) {
      const double response_s = static_cast<double>(config_.response_base_us + rtt) / 1e6;
      const double per_s = std::max(
          config_.min_additive_bps_per_s, 0.5 * config_.packet_size_bits / response_s);
      next += per_s * dt_s;
    } else {
      next *= std::pow(config_.increase_factor, dt_s);
    }
    if (incoming_bps) {
      const double cap =
          config_.incoming_cap_factor * *incoming_bps + config_.incoming_cap_offset_bps;
      next = std::min(next, std::max(cap, rate_));
    }
    rate_ = next;
  } else if (region_ == RateRegion::kDecrease && incoming_bps) {
    // At most one decrease per round trip; the detector keeps signalling
    // overuse while the queue built by the previous rate drains.
    const SimDuration guard = std::max<SimDuration>(rtt, Millis(100));
    if (!last_decrease_ || now - *last_decrease_ >= guard) {
      rate_ = std::min(rate_, config_.beta * *incoming_bps);
      UpdateCapacity(*incoming_bps);
      last_decrease_ = now;
      ++decreases_;
    } else {
      region_ = RateRegion::kHold;
    }
  }
  rate_ = std::clamp(rate_, static_cast<double>(min_bps_), static_cast<double>(max_bps_));
  return rate_;
}

double LossBasedRate(double delay_based_bps, double loss_fraction, double cap_bps) {
  if (loss_fraction > 0.10) return delay_based_bps * (1.0 - 0.5 * loss_fraction);
  if (loss_fraction < 0.02) return std::min(1.05 * delay_based_bps, cap_bps);
  return delay_based_bps;
}

}  // namespace rtcnetlab
