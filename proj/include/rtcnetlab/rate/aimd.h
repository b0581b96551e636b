#ifndef RTCNETLAB_RATE_AIMD_H_
#define RTCNETLAB_RATE_AIMD_H_

#include <cstdint>
#include <optional>

#include "rtcnetlab/rate/overuse_detector.h"
#include "rtcnetlab/rate/rate_controller.h"

namespace rtcnetlab {

struct AimdConfig {
  double beta = 0.85;
  // Multiplicative growth per second of increase.
  double increase_factor = 1.08;
  int64_t packet_size_bits = 1200 * 8;
  // Response time = this + RTT for the additive increase.
  SimDuration response_base_us = Millis(100);
  double min_additive_bps_per_s = 4000.0;
  double incoming_cap_factor = 1.5;
  int64_t incoming_cap_offset_bps = 10000;
  // Smoothing of the link-capacity estimate built from rates seen at
  // overuse.
  double capacity_smoothing = 0.05;
};

// Delay-based rate: additive-increase/multiplicative-decrease on the
// detector signal and the measured incoming rate R.
class AimdRateControl {
 public:
  AimdRateControl(const AimdConfig& config, int64_t start_bps, int64_t min_bps,
                  int64_t max_bps);

  double Update(BandwidthUsage usage, std::optional<double> incoming_bps,
                SimDuration rtt, SimTime now);

  double estimate() const { return rate_; }
  RateRegion region() const { return region_; }
  std::optional<double> link_capacity() const { return capacity_avg_; }
  bool NearCapacity() const;
  uint64_t decreases() const { return decreases_; }

 private:
  double CapacitySigmaBps() const;
  void UpdateCapacity(double incoming_bps);

  AimdConfig config_;
  double rate_;
  int64_t min_bps_;
  int64_t max_bps_;
  RateRegion region_ = RateRegion::kIncrease;
  std::optional<SimTime> last_update_;
  std::optional<SimTime> last_decrease_;
  std::optional<double> capacity_avg_;
  // Normalized variance of the capacity estimate.
  double capacity_var_ = 0.4;
  uint64_t decreases_ = 0;
};

// Loss-based stage: more than 10% loss backs off in proportion to loss,
// under 2% allows 5% headroom over the delay-based rate, otherwise holds.
double LossBasedRate(double delay_based_bps, double loss_fraction, double cap_bps);

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RATE_AIMD_H_
