#ifndef RTCNETLAB_FEEDBACK_RTCP_H_
#define RTCNETLAB_FEEDBACK_RTCP_H_

#include <cstdint>
#include <optional>

#include "rtcnetlab/feedback/messages.h"
#include "rtcnetlab/rtp/rtp_packet.h"
#include "rtcnetlab/rtp/seq_unwrapper.h"

namespace rtcnetlab {

// Sender-side report generation and RTT from the echoed timestamps.
class RtcpSender {
 public:
  void OnMediaSent(const RtpPacket& packet);
  SenderReport BuildSenderReport(SimTime now, uint32_t rtp_timestamp) const;

 private:
  uint64_t packets_ = 0;
  uint64_t octets_ = 0;
};

// rtt = now - lsr - dlsr, floored at `floor_us` so a report whose hold time
// swallows the whole gap still yields a positive RTT. nullopt without lsr.
std::optional<SimDuration> ComputeRtt(const ReceiverReport& report, SimTime now,
                                      SimDuration floor_us);

// Receiver-side statistics over the original media stream. Retransmitted
// copies model a separate repair stream and are not counted, so reported
// loss is network loss rather than loss after repair.
class ReceiveStatistics {
 public:
  explicit ReceiveStatistics(int64_t clock_hz = 90000) : clock_hz_(clock_hz) {}

  void OnPacket(const RtpPacket& packet, SimTime arrival);
  void OnSenderReport(const SenderReport& report, SimTime arrival);
  // Closes the current report interval.
  ReceiverReport BuildReport(SimTime now);

  int64_t received() const { return received_; }
  int64_t expected() const;
  double jitter_us() const;

 private:
  int64_t clock_hz_;
  SeqUnwrapper unwrapper_;
  std::optional<int64_t> base_seq_;
  int64_t highest_seq_ = -1;
  int64_t received_ = 0;
  int64_t expected_prior_ = 0;
  int64_t received_prior_ = 0;
  int64_t cumulative_lost_ = 0;
  // RFC 3550 running jitter in RTP timestamp units.
  double jitter_ = 0.0;
  std::optional<int64_t> last_transit_;
  std::optional<SimTime> last_sr_send_time_;
  SimTime last_sr_arrival_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_FEEDBACK_RTCP_H_
