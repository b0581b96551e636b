#ifndef RTCNETLAB_RTP_PACER_H_
#define RTCNETLAB_RTP_PACER_H_

#include <cstdint>
#include <deque>
#include <optional>

#include "rtcnetlab/rtp/rtp_packet.h"

namespace rtcnetlab {

// Leaky-bucket pacer. Consecutive releases are spaced by the previous
// packet's bits at the pacing rate; while backlogged, the spacing carries its
// rounding remainder so n equal packets span exactly (n-1)*bits/rate.
// Retransmissions jump ahead of queued media and FEC, staying FIFO among
// themselves.
class Pacer {
 public:
  explicit Pacer(int64_t pacing_rate_bps);

  // Throws ConfigError for non-positive rates.
  void SetPacingRate(int64_t rate_bps, SimTime now);
  int64_t pacing_rate_bps() const { return rate_bps_; }

  void Enqueue(RtpPacket packet, SimTime now);
  // Earliest time the head-of-line packet may leave; nullopt when empty.
  std::optional<SimTime> NextReleaseTime(SimTime now) const;
  // Releases the head packet at `now` (must be >= NextReleaseTime) and
  // stamps its send_time.
  RtpPacket PopNext(SimTime now);

  bool empty() const { return queue_.empty(); }
  size_t size() const { return queue_.size(); }
  int64_t queued_bytes() const { return queued_bytes_; }
  uint64_t released() const { return released_; }
  uint64_t enqueued() const { return enqueued_; }

 private:
  int64_t rate_bps_;
  std::deque<RtpPacket> queue_;
  size_t retransmissions_at_front_ = 0;
  int64_t queued_bytes_ = 0;
  // Spacing state: releases after anchor_time_ are due at
  // anchor_time_ + ceil(anchor_bits_ * 1e6 / rate).
  SimTime anchor_time_ = 0;
  int64_t anchor_bits_ = 0;
  SimTime next_allowed_ = 0;
  uint64_t released_ = 0;
  uint64_t enqueued_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RTP_PACER_H_
