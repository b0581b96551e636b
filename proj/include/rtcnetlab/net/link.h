#ifndef RTCNETLAB_NET_LINK_H_
#define RTCNETLAB_NET_LINK_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rtcnetlab/net/datagram.h"
#include "rtcnetlab/net/link_profile.h"
#include "rtcnetlab/sim/event_loop.h"
#include "rtcnetlab/sim/random.h"

namespace rtcnetlab {

struct LinkCounters {
  uint64_t sent = 0;
  uint64_t delivered = 0;
  uint64_t dropped_queue = 0;
  uint64_t dropped_random = 0;
  uint64_t dropped_range = 0;
  uint64_t bytes_delivered = 0;

  uint64_t in_flight() const {
    return sent - delivered - dropped_queue - dropped_random - dropped_range;
  }
};

struct TransmitOutcome {
  bool accepted = false;
  std::optional<DropReason> drop_reason;
};

// One direction of an impaired link: a drop-tail FIFO served at the current
// capacity, followed by propagation delay and random loss. Congestion
// episodes scale capacity and add delay; overlapping episodes compose
// multiplicatively and additively. A handover pauses the link: data queued or
// propagating is held and released as a burst at resume. Out-of-range
// periods drop everything.
class Link {
 public:
  using DeliverFn = std::function<void(Datagram, SimTime arrival)>;
  using DropFn = std::function<void(const Datagram&, DropReason)>;

  Link(EventLoop& loop, LinkProfile profile, uint64_t seed);
  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  void set_on_deliver(DeliverFn fn) { on_deliver_ = std::move(fn); }
  void set_on_drop(DropFn fn) { on_drop_ = std::move(fn); }
  // Observes every datagram offered to the link, before any drop decision.
  void set_on_sent(std::function<void(const Datagram&, SimTime)> fn) {
    on_sent_ = std::move(fn);
  }

  // Schedules every configured event (explicit and resolved processes).
  // Call once after construction.
  void ScheduleProfileEvents();

  TransmitOutcome Transmit(Datagram datagram, SimTime now);
  void ApplyEvent(const LinkEvent& event, SimTime now);
  // Counts a datagram that never reached the queue (e.g. no usable route).
  void RecordUnroutable(const Datagram& datagram);

  int64_t CurrentCapacityBps(SimTime now) const;
  SimDuration CurrentDelayUs() const;
  double CurrentLoss() const;
  bool Available(SimTime now) const;
  bool Paused(SimTime now) const { return now < paused_until_; }
  bool InCongestionEpisode() const { return !active_congestion_.empty(); }
  int64_t queued_bytes() const { return queued_bytes_; }
  // Datagrams queued, propagating or held by a handover, counted directly
  // rather than derived from the other counters.
  uint64_t InTransit() const { return queue_.size() + propagating_ + held_.size(); }
  int64_t background_load_bps() const { return background_bps_; }
  const LinkCounters& counters() const { return counters_; }
  const LinkProfile& profile() const { return profile_; }
  const std::vector<LinkEvent>& resolved_events() const { return resolved_events_; }

 private:
  void MaybeStartService();
  void OnDeparture();
  void OnDelivery(Datagram datagram);
  void Resume();
  void RedrawBackground();
  void Drop(const Datagram& datagram, DropReason reason);

  EventLoop& loop_;
  LinkProfile profile_;
  RngStream loss_rng_;
  RngStream background_rng_;
  RngStream event_rng_;
  DeliverFn on_deliver_;
  DropFn on_drop_;
  std::function<void(const Datagram&, SimTime)> on_sent_;

  std::deque<Datagram> queue_;
  int64_t queued_bytes_ = 0;
  bool busy_ = false;
  uint64_t propagating_ = 0;
  bool draining_burst_ = false;
  SimTime last_arrival_ = 0;
  SimTime paused_until_ = 0;
  std::vector<Datagram> held_;
  int out_of_range_active_ = 0;
  std::vector<std::pair<uint64_t, LinkEvent>> active_congestion_;
  uint64_t next_episode_id_ = 0;
  std::vector<LinkEvent> resolved_events_;
  int64_t background_bps_ = 0;
  LinkCounters counters_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_NET_LINK_H_
