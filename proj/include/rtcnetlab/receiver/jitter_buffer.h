#ifndef RTCNETLAB_RECEIVER_JITTER_BUFFER_H_
#define RTCNETLAB_RECEIVER_JITTER_BUFFER_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "rtcnetlab/rtp/rtp_packet.h"
#include "rtcnetlab/rtp/seq_unwrapper.h"

namespace rtcnetlab {

struct JitterBufferConfig {
  SimDuration playout_delay_us = Millis(200);
  // Longest the playout clock may fall behind its nominal schedule while
  // waiting for an incomplete frame.
  SimDuration max_stall_us = Millis(100);
  // Accumulated stall recovered per on-time frame.
  SimDuration catchup_step_us = Millis(25);
  SimDuration decode_latency_us = 1000;
  bool keyframe_request_enabled = true;
  SimDuration keyframe_request_interval_us = Millis(200);

  void Validate() const;
};

// End-to-end latency of one played frame, split four ways. processing is
// encode time; transmission is serialization plus propagation of the packet
// that completed the frame; decoding is jitter-buffer wait plus decode time;
// queuing is the rest (pacer, link queue, repair and head-of-line waits).
struct LatencyBreakdown {
  SimDuration processing = 0;
  SimDuration queuing = 0;
  SimDuration transmission = 0;
  SimDuration decoding = 0;

  SimDuration total() const { return processing + queuing + transmission + decoding; }
};

// What the receiver knows about a frame's schedule before its packets land
// (capture cadence from the RTP clock). packet_count and encode_done are
// accounting metadata only; they never drive playout decisions.
struct ExpectedFrame {
  uint64_t frame_id = 0;
  SimTime capture_time = 0;
  SimTime encode_done_time = 0;
  int packet_count = 0;
};

struct PacketArrival {
  SimTime arrival = 0;
  int64_t payload_bytes = 0;
};

struct PlayoutEvent {
  enum class Kind { kPlayed, kSkipped };
  Kind kind = Kind::kSkipped;
  uint64_t frame_id = 0;
  // Decision time; for played frames, playout_time = decided_at + decode.
  SimTime decided_at = 0;
  SimTime playout_time = 0;
  LatencyBreakdown latency;
  bool is_keyframe = false;
  bool undecodable = false;
  int missing_packets = 0;
  int packet_count = 0;
  // Growth of the playout-clock lag caused by this frame.
  SimDuration stall_us = 0;
  bool request_keyframe = false;
  std::vector<PacketArrival> packets;
};

enum class InsertResult { kAccepted, kDuplicate, kLate };

// Playback buffer: assembles frames, plays them in capture order at
// capture_time + playout_delay (+ accumulated stall), stalls up to
// max_stall for an incomplete frame and then skips it. A skipped frame
// breaks the reference chain; delta frames stay undecodable until a
// keyframe completes, and a keyframe request is raised.
class JitterBuffer {
 public:
  explicit JitterBuffer(const JitterBufferConfig& config);

  void ExpectFrame(const ExpectedFrame& frame);
  // `transmission` is serialization + propagation of the delivered copy.
  InsertResult InsertPacket(const RtpPacket& packet, SimTime arrival,
                            SimDuration transmission);
  std::vector<PlayoutEvent> Advance(SimTime now);
  // Earliest time at which Advance() could decide the next frame: its
  // playout slot if complete, otherwise the slot or the stall limit.
  std::optional<SimTime> NextDeadline() const;

  // Highest media sequence number of any decided frame.
  std::optional<uint16_t> decided_up_to() const { return decided_up_to_; }
  std::optional<uint16_t> last_decodable_keyframe_seq() const { return keyframe_seq_; }
  SimDuration current_stall_offset() const { return offset_; }
  uint64_t late_packets() const { return late_packets_; }
  uint64_t release_order_violations() const { return order_violations_; }
  void set_on_release(std::function<void(uint16_t)> fn) { on_release_ = std::move(fn); }

 private:
  struct Received {
    uint16_t seq = 0;
    SimTime arrival = 0;
    SimDuration transmission = 0;
    int64_t payload_bytes = 0;
  };
  struct FrameState {
    std::map<int, Received> packets;
    int packets_in_frame = 0;
    bool is_keyframe = false;
    std::optional<SimTime> completion;
    SimDuration critical_transmission = 0;
  };

  PlayoutEvent Decide(const ExpectedFrame& expected, FrameState* state,
                      SimTime decided_at, bool complete);

  JitterBufferConfig config_;
  std::deque<ExpectedFrame> expected_;
  std::map<uint64_t, FrameState> frames_;
  uint64_t next_undecided_ = 0;
  SimDuration offset_ = 0;
  bool chain_ok_ = true;
  std::optional<SimTime> last_keyframe_request_;
  SeqUnwrapper unwrapper_;
  int64_t last_released_ = -1;
  std::optional<uint16_t> decided_up_to_;
  std::optional<uint16_t> keyframe_seq_;
  uint64_t late_packets_ = 0;
  uint64_t order_violations_ = 0;
  std::function<void(uint16_t)> on_release_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RECEIVER_JITTER_BUFFER_H_
