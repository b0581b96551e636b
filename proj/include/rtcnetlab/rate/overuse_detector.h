#ifndef RTCNETLAB_RATE_OVERUSE_DETECTOR_H_
#define RTCNETLAB_RATE_OVERUSE_DETECTOR_H_

#include <optional>
#include <string_view>

#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

enum class BandwidthUsage { kNormal, kOveruse, kUnderuse };

std::string_view BandwidthUsageName(BandwidthUsage usage);

struct OveruseConfig {
  double initial_threshold_ms = 12.5;
  double k_up = 0.0087;
  double k_down = 0.039;
  double overuse_time_ms = 10.0;
  double min_threshold_ms = 6.0;
  double max_threshold_ms = 600.0;
  // Samples this far above the threshold do not move it.
  double max_adapt_offset_ms = 15.0;
  // Caps the time step used in threshold adaptation.
  double max_adapt_dt_ms = 100.0;
};

// Compares the (scaled) delay gradient against an adaptive threshold.
// Overuse needs the gradient above the threshold for at least
// overuse_time_ms and for at least two consecutive samples.
class OveruseDetector {
 public:
  explicit OveruseDetector(const OveruseConfig& config = {});

  // `send_delta_ms` is the inter-departure time the sample spans.
  BandwidthUsage Detect(double m_ms, double send_delta_ms, SimTime now);

  BandwidthUsage state() const { return state_; }
  double threshold() const { return threshold_; }

 private:
  void UpdateThreshold(double m_ms, SimTime now);

  OveruseConfig config_;
  double threshold_;
  double time_over_using_ = -1.0;
  int overuse_counter_ = 0;
  std::optional<SimTime> last_update_;
  BandwidthUsage state_ = BandwidthUsage::kNormal;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RATE_OVERUSE_DETECTOR_H_
