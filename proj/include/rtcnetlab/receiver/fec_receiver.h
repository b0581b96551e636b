#ifndef RTCNETLAB_RECEIVER_FEC_RECEIVER_H_
#define RTCNETLAB_RECEIVER_FEC_RECEIVER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rtcnetlab/rtp/rtp_packet.h"
#include "rtcnetlab/rtp/seq_unwrapper.h"

namespace rtcnetlab {

// Holds recent media packets and parity packets and repairs any group with
// exactly one missing member. Recovered packets are returned to the caller,
// which injects them as if received.
class FecReceiver {
 public:
  explicit FecReceiver(int64_t history_span = 2000);

  std::vector<RtpPacket> OnMediaPacket(const RtpPacket& packet);
  std::vector<RtpPacket> OnFecPacket(const RtpPacket& fec);

  uint64_t recovered() const { return recovered_; }
  uint64_t unrecoverable_groups() const;

 private:
  std::optional<RtpPacket> TryRepair(const RtpPacket& fec);
  void Evict();

  int64_t history_span_;
  SeqUnwrapper unwrapper_;
  int64_t newest_ = -1;
  std::map<int64_t, RtpPacket> media_;
  // Pending parity packets keyed by the unwrapped first covered sequence.
  std::map<int64_t, RtpPacket> pending_fec_;
  uint64_t recovered_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RECEIVER_FEC_RECEIVER_H_
