#ifndef RTCNETLAB_NET_LINK_PROFILE_H_
#define RTCNETLAB_NET_LINK_PROFILE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtcnetlab/sim/random.h"
#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

enum class LinkEventKind : uint8_t { kHandover, kCongestion, kOutOfRange };

std::string LinkEventKindName(LinkEventKind kind);
LinkEventKind ParseLinkEventKind(const std::string& name);

struct LinkEvent {
  LinkEventKind kind = LinkEventKind::kCongestion;
  SimTime start_us = 0;
  // Pause length for handovers; episode length otherwise.
  SimDuration duration_us = 0;
  // Congestion only: multiplicative capacity factor in (0, 1], additive
  // one-way delay, and additional random loss while the episode lasts.
  double capacity_factor = 1.0;
  SimDuration extra_delay_us = 0;
  double extra_loss = 0.0;

  void Validate() const;
};

// Randomly placed events, resolved into explicit LinkEvents per seed.
// Starts are uniform over [window_start, window_end); durations, factors and
// extra loss are uniform over their ranges.
struct LinkEventProcess {
  LinkEventKind kind = LinkEventKind::kCongestion;
  int count = 0;
  SimTime window_start_us = 0;
  SimTime window_end_us = 0;
  SimDuration min_duration_us = 0;
  SimDuration max_duration_us = 0;
  double min_capacity_factor = 1.0;
  double max_capacity_factor = 1.0;
  SimDuration extra_delay_us = 0;
  double min_extra_loss = 0.0;
  double max_extra_loss = 0.0;

  void Validate() const;
  std::vector<LinkEvent> Resolve(RngStream& rng) const;
};

// Aggregate background users: unit_count units each loading the link at a
// per-unit rate, both redrawn every redraw_period (0: drawn once). The load
// is subtracted from capacity, floored at 5% of base capacity.
struct BackgroundLoadConfig {
  int min_units = 10;
  int max_units = 20;
  int64_t min_unit_rate_bps = 300'000;
  int64_t max_unit_rate_bps = 1'500'000;
  SimDuration redraw_period_us = 0;
  // Scales the drawn aggregate; 1.0 means every unit targets this link.
  double share = 1.0;

  void Validate() const;
};

struct LinkProfile {
  std::string name = "link";
  int64_t base_capacity_bps = 50'000'000;
  SimDuration base_delay_us = Millis(15);
  int64_t queue_limit_bytes = 3'000'000;
  double random_loss = 0.0;
  std::vector<LinkEvent> events;
  std::vector<LinkEventProcess> event_processes;
  std::optional<BackgroundLoadConfig> background;
  // The link is unusable from this time on (e.g. leaving Wi-Fi range).
  std::optional<SimTime> available_until_us;
  // Drain rate for data held during a handover, relative to base capacity.
  double handover_burst_factor = 2.0;

  void Validate(int mtu) const;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_NET_LINK_PROFILE_H_
