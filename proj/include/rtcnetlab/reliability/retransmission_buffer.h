#ifndef RTCNETLAB_RELIABILITY_RETRANSMISSION_BUFFER_H_
#define RTCNETLAB_RELIABILITY_RETRANSMISSION_BUFFER_H_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rtcnetlab/rtp/rtp_packet.h"
#include "rtcnetlab/rtp/seq_unwrapper.h"

namespace rtcnetlab {

struct RetransmissionConfig {
  bool nack_enabled = true;
  SimDuration max_age_us = Millis(1000);
  int max_retransmissions = 10;
  // Share of the bandwidth estimate retransmissions may use per second.
  double bandwidth_fraction = 0.25;
  int64_t max_seq_span = 10000;

  void Validate() const;
};

struct NackResponseStats {
  uint64_t requested = 0;
  uint64_t retransmitted = 0;
  uint64_t skipped_not_buffered = 0;
  uint64_t skipped_within_rtt = 0;
  uint64_t skipped_max_count = 0;
  uint64_t skipped_bandwidth = 0;
};

// Sender-side history of media packets answering NACK requests. Each request
// is gated by: presence in the buffer, no retransmission of the same packet
// within the last RTT, a per-packet retransmission cap, and a one-second
// retransmission byte budget derived from the bandwidth estimate.
class RetransmissionBuffer {
 public:
  explicit RetransmissionBuffer(const RetransmissionConfig& config);

  void Store(const RtpPacket& packet, SimTime now);

  // Returns copies marked is_retransmission; transport_seq is cleared so the
  // sender assigns a fresh one.
  std::vector<RtpPacket> HandleNack(std::span<const uint16_t> seqs, SimTime now,
                                    SimDuration rtt_estimate,
                                    int64_t bandwidth_estimate_bps);

  bool Contains(uint16_t seq) const;
  std::optional<int> RetransmitCount(uint16_t seq) const;
  size_t size() const { return entries_.size(); }
  const NackResponseStats& stats() const { return stats_; }
  // Retransmitted bytes within (now - 1 s, now].
  int64_t RecentRetransmitBytes(SimTime now);

 private:
  struct Entry {
    RtpPacket packet;
    SimTime first_send_time = 0;
    std::optional<SimTime> last_retransmit_time;
    int retransmit_count = 0;
  };

  void Evict(SimTime now);

  RetransmissionConfig config_;
  SeqUnwrapper unwrapper_;
  std::map<int64_t, Entry> entries_;
  int64_t newest_ = -1;
  std::deque<std::pair<SimTime, int64_t>> recent_retransmits_;
  int64_t recent_bytes_ = 0;
  NackResponseStats stats_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RELIABILITY_RETRANSMISSION_BUFFER_H_
