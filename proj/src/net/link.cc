#include "rtcnetlab/net/link.h"

#include <algorithm>
#include <cmath>

namespace rtcnetlab {

std::string LinkEventKindName(LinkEventKind kind) {
  switch (kind) {
    case LinkEventKind::kHandover: return "handover";
    case LinkEventKind::kCongestion: return "congestion";
    case LinkEventKind::kOutOfRange: return "out_of_range";
  }
  return "unknown";
}

LinkEventKind ParseLinkEventKind(const std::string& name) {
  if (name == "handover") return LinkEventKind::kHandover;
  if (name == "congestion") return LinkEventKind::kCongestion;
  if (name == "out_of_range") return LinkEventKind::kOutOfRange;
  throw ConfigError("unknown link event kind '" + name +
                    "' (expected handover, congestion or out_of_range)");
}

void LinkEvent::Validate() const {
  if (start_us < 0) throw ConfigError("link event start must be >= 0");
  if (duration_us <= 0) {
    throw ConfigError(kind == LinkEventKind::kHandover
                          ? "handover pause must be > 0"
                          : "link event duration must be > 0");
  }
  if (!(capacity_factor > 0.0 && capacity_factor <= 1.0)) {
    throw ConfigError("congestion capacity_factor must lie in (0, 1]");
  }
  if (extra_delay_us < 0) throw ConfigError("extra_delay must be >= 0");
  if (!(extra_loss >= 0.0 && extra_loss <= 1.0)) {
    throw ConfigError("extra_loss must lie in [0, 1]");
  }
}

void LinkEventProcess::Validate() const {
  if (count < 0) throw ConfigError("event process count must be >= 0");
  if (window_end_us < window_start_us) {
    throw ConfigError("event process window must satisfy start <= end");
  }
  if (min_duration_us <= 0 || max_duration_us < min_duration_us) {
    throw ConfigError("event process durations must satisfy 0 < min <= max");
  }
  if (!(min_capacity_factor > 0.0 && max_capacity_factor <= 1.0 &&
        min_capacity_factor <= max_capacity_factor)) {
    throw ConfigError("event process capacity factors must satisfy 0 < min <= max <= 1");
  }
  if (!(min_extra_loss >= 0.0 && max_extra_loss <= 1.0 &&
        min_extra_loss <= max_extra_loss)) {
    throw ConfigError("event process extra loss must satisfy 0 <= min <= max <= 1");
  }
}

std::vector<LinkEvent> LinkEventProcess::Resolve(RngStream& rng) const {
  std::vector<LinkEvent> events;
  for (int i = 0; i < count; ++i) {
    LinkEvent e;
    e.kind = kind;
    e.start_us = rng.UniformInt(window_start_us, std::max(window_start_us, window_end_us - 1));
    e.duration_us = rng.UniformInt(min_duration_us, max_duration_us);
    e.capacity_factor = rng.Uniform(min_capacity_factor, max_capacity_factor);
    e.extra_delay_us = extra_delay_us;
    e.extra_loss = rng.Uniform(min_extra_loss, max_extra_loss);
    events.push_back(e);
  }
  std::sort(events.begin(), events.end(),
            [](const LinkEvent& a, const LinkEvent& b) { return a.start_us < b.start_us; });
  return events;
}

void BackgroundLoadConfig::Validate() const {
  if (min_units < 0 || max_units < min_units) {
    throw ConfigError("background units must satisfy 0 <= min <= max");
  }
  if (min_unit_rate_bps < 0 || max_unit_rate_bps < min_unit_rate_bps) {
    throw ConfigError("background unit rates must satisfy 0 <= min <= max");
  }
  if (redraw_period_us < 0) throw ConfigError("background redraw period must be >= 0");
  if (!(share >= 0.0)) throw ConfigError("background share must be >= 0");
}

void LinkProfile::Validate(int mtu) const {
  if (base_capacity_bps <= 0) throw ConfigError("link '" + name + "': capacity must be > 0");
  if (base_delay_us < 0) throw ConfigError("link '" + name + "': delay must be >= 0");
  if (queue_limit_bytes <= mtu) {
    throw ConfigError("link '" + name + "': queue_limit must exceed the MTU");
  }
  if (!(random_loss >= 0.0 && random_loss < 1.0)) {
    throw ConfigError("link '" + name + "': random_loss must lie in [0, 1)");
  }
  if (!(handover_burst_factor >= 1.0)) {
    throw ConfigError("link '" + name + "': handover_burst_factor must be >= 1");
  }
  for (const auto& e : events) e.Validate();
  for (const auto& p : event_processes) p.Validate();
  if (background) background->Validate();
}

Link::Link(EventLoop& loop, LinkProfile profile, uint64_t seed)
    : loop_(loop),
      profile_(std::move(profile)),
      loss_rng_(seed, "loss." + profile_.name),
      background_rng_(seed, "background." + profile_.name),
      event_rng_(seed, "events." + profile_.name) {
  if (profile_.background) {
    RedrawBackground();
  }
}

void Link::RedrawBackground() {
  const BackgroundLoadConfig& bg = *profile_.background;
  const int64_t units = background_rng_.UniformInt(bg.min_units, bg.max_units);
  double load = 0.0;
  for (int64_t i = 0; i < units; ++i) {
    load += background_rng_.Uniform(static_cast<double>(bg.min_unit_rate_bps),
                                    static_cast<double>(bg.max_unit_rate_bps));
  }
  background_bps_ = std::llround(load * bg.share);
  if (bg.redraw_period_us > 0) {
    loop_.ScheduleAfter(bg.redraw_period_us, EventKind::kLinkEvent,
                        [this] { RedrawBackground(); });
  }
}

void Link::ScheduleProfileEvents() {
  resolved_events_ = profile_.events;
  for (const auto& process : profile_.event_processes) {
    auto events = process.Resolve(event_rng_);
    resolved_events_.insert(resolved_events_.end(), events.begin(), events.end());
  }
  std::stable_sort(resolved_events_.begin(), resolved_events_.end(),
                   [](const LinkEvent& a, const LinkEvent& b) {
                     return a.start_us < b.start_us;
                   });
  for (const LinkEvent& event : resolved_events_) {
    loop_.Schedule(std::max(event.start_us, loop_.now()), EventKind::kLinkEvent,
                   [this, event] { ApplyEvent(event, loop_.now()); });
  }
}

int64_t Link::CurrentCapacityBps(SimTime) const {
  const double floor = 0.05 * static_cast<double>(profile_.base_capacity_bps);
  double capacity = std::max(
      floor, static_cast<double>(profile_.base_capacity_bps - background_bps_));
  for (const auto& [id, e] : active_congestion_) capacity *= e.capacity_factor;
  return std::max<int64_t>(1000, std::llround(capacity));
}

SimDuration Link::CurrentDelayUs() const {
  SimDuration delay = profile_.base_delay_us;
  for (const auto& [id, e] : active_congestion_) delay += e.extra_delay_us;
  return delay;
}

double Link::CurrentLoss() const {
  double loss = profile_.random_loss;
  for (const auto& [id, e] : active_congestion_) loss += e.extra_loss;
  return std::clamp(loss, 0.0, 1.0);
}

bool Link::Available(SimTime now) const {
  if (out_of_range_active_ > 0) return false;
  return !profile_.available_until_us || now < *profile_.available_until_us;
}

void Link::Drop(const Datagram& datagram, DropReason reason) {
  switch (reason) {
    case DropReason::kQueueOverflow: ++counters_.dropped_queue; break;
    case DropReason::kRandom: ++counters_.dropped_random; break;
    case DropReason::kOutOfRange: ++counters_.dropped_range; break;
  }
  if (on_drop_) on_drop_(datagram, reason);
}

void Link::RecordUnroutable(const Datagram& datagram) {
  ++counters_.sent;
  if (on_sent_) on_sent_(datagram, loop_.now());
  Drop(datagram, DropReason::kOutOfRange);
}

TransmitOutcome Link::Transmit(Datagram datagram, SimTime now) {
  ++counters_.sent;
  datagram.sent_time = now;
  if (on_sent_) on_sent_(datagram, now);
  if (!Available(now)) {
    Drop(datagram, DropReason::kOutOfRange);
    return {false, DropReason::kOutOfRange};
  }
  if (queued_bytes_ + datagram.size_bytes > profile_.queue_limit_bytes) {
    Drop(datagram, DropReason::kQueueOverflow);
    return {false, DropReason::kQueueOverflow};
  }
  queued_bytes_ += datagram.size_bytes;
  queue_.push_back(std::move(datagram));
  MaybeStartService();
  return {true, std::nullopt};
}

void Link::MaybeStartService() {
  const SimTime now = loop_.now();
  if (busy_ || queue_.empty() || Paused(now)) return;
  Datagram& head = queue_.front();
  head.service_start_time = now;
  int64_t rate = CurrentCapacityBps(now);
  if (draining_burst_) {
    rate = std::max<int64_t>(rate, std::llround(profile_.handover_burst_factor *
                                       static_cast<double>(profile_.base_capacity_bps)));
  }
  busy_ = true;
  loop_.Schedule(now + SerializationTime(head.size_bytes, rate),
                 EventKind::kLinkDeparture, [this] { OnDeparture(); });
}

void Link::OnDeparture() {
  const SimTime now = loop_.now();
  Datagram datagram = std::move(queue_.front());
  queue_.pop_front();
  queued_bytes_ -= datagram.size_bytes;
  busy_ = false;
  datagram.departure_time = now;
  if (queue_.empty()) draining_burst_ = false;

  if (!Available(now)) {
    Drop(datagram, DropReason::kOutOfRange);
  } else if (loss_rng_.Bernoulli(CurrentLoss())) {
    Drop(datagram, DropReason::kRandom);
  } else {
    const SimTime arrival = std::max(now + CurrentDelayUs(), last_arrival_);
    last_arrival_ = arrival;
    datagram.propagation_us = arrival - now;
    ++propagating_;
    loop_.Schedule(arrival, EventKind::kLinkDelivery,
                   [this, d = std::move(datagram)]() mutable { OnDelivery(std::move(d)); });
  }
  MaybeStartService();
}

void Link::OnDelivery(Datagram datagram) {
  const SimTime now = loop_.now();
  --propagating_;
  if (Paused(now)) {
    held_.push_back(std::move(datagram));
    return;
  }
  ++counters_.delivered;
  counters_.bytes_delivered += static_cast<uint64_t>(datagram.size_bytes);
  if (on_deliver_) on_deliver_(std::move(datagram), now);
}

void Link::Resume() {
  const SimTime now = loop_.now();
  if (Paused(now)) return;  // extended by an overlapping handover
  const int64_t burst_rate = std::llround(
      profile_.handover_burst_factor * static_cast<double>(profile_.base_capacity_bps));
  SimTime release = now;
  for (Datagram& d : held_) {
    release += SerializationTime(d.size_bytes, burst_rate);
    last_arrival_ = std::max(last_arrival_, release);
    ++propagating_;
    loop_.Schedule(release, EventKind::kLinkDelivery,
                   [this, dg = std::move(d)]() mutable { OnDelivery(std::move(dg)); });
  }
  held_.clear();
  draining_burst_ = !queue_.empty();
  MaybeStartService();
}

void Link::ApplyEvent(const LinkEvent& event, SimTime now) {
  switch (event.kind) {
    case LinkEventKind::kHandover:
      paused_until_ = std::max(paused_until_, now + event.duration_us);
      loop_.Schedule(paused_until_, EventKind::kLinkEvent, [this] { Resume(); });
      break;
    case LinkEventKind::kCongestion: {
      const uint64_t id = next_episode_id_++;
      active_congestion_.emplace_back(id, event);
      loop_.Schedule(now + event.duration_us, EventKind::kLinkEvent, [this, id] {
        std::erase_if(active_congestion_,
                      [id](const auto& entry) { return entry.first == id; });
      });
      break;
    }
    case LinkEventKind::kOutOfRange:
      ++out_of_range_active_;
      loop_.Schedule(now + event.duration_us, EventKind::kLinkEvent,
                     [this] { --out_of_range_active_; });
      break;
  }
}

}  // namespace rtcnetlab
