#include "rtcnetlab/rate/simple_controllers.h"

#include <algorithm>

namespace rtcnetlab {

FixedController::FixedController(int64_t rate_bps) : rate_bps_(ClampBitrate(rate_bps)) {}

RateDecision FixedController::Decide(SimTime now) {
  return {rate_bps_, RateRegion::kHold};
}

ScriptedController::ScriptedController(Table table) : table_(std::move(table)) {
  if (table_.empty()) throw ConfigError("scripted controller needs at least one entry");
  for (size_t i = 1; i < table_.size(); ++i) {
    if (table_[i].first <= table_[i - 1].first) {
      throw ConfigError("scripted controller times must be strictly increasing");
    }
  }
}

RateDecision ScriptedController::Decide(SimTime now) {
  auto it = std::upper_bound(table_.begin(), table_.end(), now,
                             [](SimTime t, const auto& entry) { return t < entry.first; });
  const int64_t rate = it == table_.begin() ? table_.front().second : std::prev(it)->second;
  return {ClampBitrate(static_cast<double>(rate)), RateRegion::kHold};
}

ExternalController::ExternalController(int64_t start_bps)
    : rate_bps_(ClampBitrate(static_cast<double>(start_bps))) {}

int64_t ExternalController::SetTarget(int64_t bps) {
  rate_bps_ = ClampBitrate(static_cast<double>(bps));
  return rate_bps_;
}

RateDecision ExternalController::Decide(SimTime now) {
  return {rate_bps_, RateRegion::kHold};
}

}  // namespace rtcnetlab
