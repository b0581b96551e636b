#include "rtcnetlab/rtp/pacer.h"

#include <algorithm>

namespace rtcnetlab {

Pacer::Pacer(int64_t pacing_rate_bps) : rate_bps_(pacing_rate_bps) {
  if (pacing_rate_bps <= 0) throw ConfigError("pacing rate must be > 0");
}

void Pacer::SetPacingRate(int64_t rate_bps, SimTime now) {
  if (rate_bps <= 0) throw ConfigError("pacing rate must be > 0");
  if (rate_bps == rate_bps_) return;
  rate_bps_ = rate_bps;
  // Keep the already granted slot; spacing from here on uses the new rate.
  anchor_time_ = std::max(now, next_allowed_);
  anchor_bits_ = 0;
  next_allowed_ = anchor_time_;
}

void Pacer::Enqueue(RtpPacket packet, SimTime now) {
  packet.enqueue_time = std::max(packet.enqueue_time, now);
  queued_bytes_ += packet.size_bytes();
  ++enqueued_;
  if (packet.is_retransmission) {
    queue_.insert(queue_.begin() + static_cast<std::ptrdiff_t>(
                                       retransmissions_at_front_),
                  std::move(packet));
    ++retransmissions_at_front_;
  } else {
    queue_.push_back(std::move(packet));
  }
}

std::optional<SimTime> Pacer::NextReleaseTime(SimTime now) const {
  if (queue_.empty()) return std::nullopt;
  return std::max(now, next_allowed_);
}

RtpPacket Pacer::PopNext(SimTime now) {
  if (queue_.empty()) throw SimulationError("pacer pop on empty queue");
  if (now < next_allowed_) {
    throw SimulationError("pacer released a packet before its slot");
  }
  RtpPacket packet = std::move(queue_.front());
  queue_.pop_front();
  if (retransmissions_at_front_ > 0) --retransmissions_at_front_;
  queued_bytes_ -= packet.size_bytes();
  ++released_;

  if (now > next_allowed_) {
    // Idle gap: restart spacing from this release.
    anchor_time_ = now;
    anchor_bits_ = 0;
  }
  anchor_bits_ += packet.size_bits();
  next_allowed_ = anchor_time_ + (anchor_bits_ * kMicrosPerSecond + rate_bps_ - 1) /
                                     rate_bps_;
  packet.send_time = now;
  return packet;
}

}  // namespace rtcnetlab
