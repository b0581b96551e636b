#ifndef RTCNETLAB_RATE_RATE_CONTROLLER_H_
#define RTCNETLAB_RATE_RATE_CONTROLLER_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rtcnetlab/feedback/messages.h"
#include "rtcnetlab/feedback/twcc.h"
#include "rtcnetlab/media/encoder.h"

namespace rtcnetlab {

enum class RateRegion { kHold, kIncrease, kDecrease };

std::string_view RateRegionName(RateRegion region);

struct RateDecision {
  int64_t target_bps = 0;
  RateRegion region = RateRegion::kHold;
};

inline int64_t ClampBitrate(double bps, int64_t min_bps = kMinBitrateBps,
                            int64_t max_bps = kMaxBitrateBps) {
  if (bps < static_cast<double>(min_bps)) return min_bps;
  if (bps > static_cast<double>(max_bps)) return max_bps;
  return static_cast<int64_t>(bps);
}

// Sender-side bitrate decision layer. Hooks are invoked synchronously from
// the event loop; a controller must be a deterministic function of the
// feedback it has seen and the current time.
class RateController {
 public:
  virtual ~RateController() = default;

  virtual void OnTransportFeedback(const std::vector<PacketResult>& /*results*/,
                                   SimTime /*now*/) {}
  virtual void OnReceiverReport(const ReceiverReport& /*report*/,
                                std::optional<SimDuration> /*rtt*/, SimTime /*now*/) {}
  // Always within [kMinBitrateBps, kMaxBitrateBps].
  virtual RateDecision Decide(SimTime now) = 0;
  virtual std::string_view name() const = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RATE_RATE_CONTROLLER_H_
