#ifndef RTCNETLAB_FEEDBACK_MESSAGES_H_
#define RTCNETLAB_FEEDBACK_MESSAGES_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

// Arrival deltas in transport feedback are multiples of this.
constexpr SimDuration kTwccDeltaTick = 250;

struct SenderReport {
  SimTime send_time = 0;
  uint32_t rtp_timestamp = 0;
  uint64_t packet_count = 0;
  uint64_t octet_count = 0;

  int64_t size_bytes() const { return 28; }
};

struct ReceiverReport {
  // Loss over the report interval as an 8-bit fixed-point fraction (/256).
  uint8_t fraction_lost_q8 = 0;
  int64_t cumulative_lost = 0;
  // Extended highest sequence number received.
  int64_t highest_seq = 0;
  // Running interarrival jitter estimate, in µs.
  double interarrival_jitter_us = 0.0;
  // Send time of the last sender report seen; nullopt before any.
  std::optional<SimTime> lsr;
  // Delay between receiving that sender report and sending this report.
  SimDuration dlsr = 0;
  SimTime send_time = 0;

  double fraction_lost() const { return fraction_lost_q8 / 256.0; }
  int64_t size_bytes() const { return 32; }
};

struct TwccStatus {
  int64_t transport_seq = 0;
  bool received = false;
  // Arrival minus the previous received packet's arrival (the reference
  // time for the first one), in kTwccDeltaTick units. Signed: reordered
  // packets yield negative deltas.
  int64_t delta_ticks = 0;
};

struct TwccFeedback {
  uint32_t feedback_seq = 0;
  int64_t base_seq = 0;
  // Reference time in kTwccDeltaTick units.
  int64_t reference_ticks = 0;
  std::vector<TwccStatus> statuses;
  SimTime feedback_send_time = 0;

  int64_t last_seq() const { return base_seq + static_cast<int64_t>(statuses.size()) - 1; }
  int64_t size_bytes() const {
    return 20 + 2 * static_cast<int64_t>(statuses.size());
  }
};

struct NackRequest {
  std::vector<uint16_t> seqs;
  SimTime send_time = 0;

  int64_t size_bytes() const { return 12 + 4 * static_cast<int64_t>(seqs.size()); }
};

// Picture loss indication: the decoder needs a fresh keyframe.
struct KeyframeRequest {
  SimTime send_time = 0;

  int64_t size_bytes() const { return 12; }
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_FEEDBACK_MESSAGES_H_
