#ifndef RTCNETLAB_RATE_SIMPLE_CONTROLLERS_H_
#define RTCNETLAB_RATE_SIMPLE_CONTROLLERS_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "rtcnetlab/rate/rate_controller.h"

namespace rtcnetlab {

class FixedController : public RateController {
 public:
  explicit FixedController(int64_t rate_bps);

  RateDecision Decide(SimTime now) override;
  std::string_view name() const override { return "fixed"; }

 private:
  int64_t rate_bps_;
};

// Step function of time: the rate of the last entry whose time is <= now.
class ScriptedController : public RateController {
 public:
  using Table = std::vector<std::pair<SimTime, int64_t>>;

  explicit ScriptedController(Table table);

  RateDecision Decide(SimTime now) override;
  std::string_view name() const override { return "scripted"; }

 private:
  Table table_;
};

// Holds whatever rate an external agent last set.
class ExternalController : public RateController {
 public:
  explicit ExternalController(int64_t start_bps);

  // Returns the clamped rate actually applied.
  int64_t SetTarget(int64_t bps);
  RateDecision Decide(SimTime now) override;
  std::string_view name() const override { return "bridge"; }
  int64_t target() const { return rate_bps_; }

 private:
  int64_t rate_bps_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RATE_SIMPLE_CONTROLLERS_H_
