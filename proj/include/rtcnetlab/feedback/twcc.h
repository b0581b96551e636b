#ifndef RTCNETLAB_FEEDBACK_TWCC_H_
#define RTCNETLAB_FEEDBACK_TWCC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rtcnetlab/feedback/messages.h"

namespace rtcnetlab {

// Rounds an absolute time to the nearest delta tick. Deltas are differences
// of rounded absolute times, so quantization error never accumulates along
// the delta chain.
int64_t ToTwccTicks(SimTime t);

// Receiver side. Each feedback covers the contiguous transport_seq range
// from the end of the previous feedback to the highest sequence received
// since; a packet arriving after its range was reported is not re-reported.
class TwccRecorder {
 public:
  explicit TwccRecorder(int64_t first_seq = 0) : next_base_(first_seq) {}

  // Returns false for a duplicate or a packet whose range was already sent.
  bool OnPacket(int64_t transport_seq, SimTime arrival);
  // No feedback when nothing arrived since the last one.
  std::optional<TwccFeedback> BuildFeedback(SimTime now);

  int64_t next_base() const { return next_base_; }
  uint64_t late_packets() const { return late_; }

 private:
  int64_t next_base_;
  uint32_t next_feedback_seq_ = 0;
  std::map<int64_t, SimTime> pending_;
  uint64_t late_ = 0;
};

// (transport_seq, arrival) for every received status, rebuilt from ticks.
std::vector<std::pair<int64_t, SimTime>> ReconstructArrivals(const TwccFeedback& feedback);

struct SentPacketInfo {
  int64_t transport_seq = 0;
  SimTime send_time = 0;
  int64_t size_bytes = 0;
  bool is_retransmission = false;
};

struct PacketResult {
  enum class Status { kReceived, kLost, kUnknown };
  SentPacketInfo sent;
  Status status = Status::kUnknown;
  SimTime arrival = 0;
};

// Sender side: joins feedback statuses with send-side records. When a
// feedback packet is lost, the next one that arrives extends the reported
// range back to where the last received feedback ended; packets in the gap
// are reported with unknown status so they count neither as lost nor as
// received.
class TransportFeedbackAdapter {
 public:
  void OnPacketSent(const SentPacketInfo& info);
  std::vector<PacketResult> OnFeedback(const TwccFeedback& feedback);

  // First transport_seq not yet covered by any processed feedback.
  int64_t covered_until() const { return covered_until_; }
  uint64_t unknown_packets() const { return unknown_; }
  uint64_t lost_feedback() const { return lost_feedback_; }

 private:
  PacketResult Take(int64_t seq, PacketResult::Status status, SimTime arrival);

  std::map<int64_t, SentPacketInfo> history_;
  int64_t covered_until_ = 0;
  std::optional<uint32_t> last_feedback_seq_;
  uint64_t unknown_ = 0;
  uint64_t lost_feedback_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_FEEDBACK_TWCC_H_
