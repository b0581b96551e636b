#ifndef RTCNETLAB_MEDIA_ENCODER_H_
#define RTCNETLAB_MEDIA_ENCODER_H_

#include <cstdint>
#include <optional>

#include "rtcnetlab/sim/random.h"
#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

constexpr int64_t kMinBitrateBps = 400'000;
constexpr int64_t kMaxBitrateBps = 10'000'000;
// Smallest delta frame relative to its nominal size.
constexpr int kMinDeltaDivisor = 8;

struct EncoderConfig {
  int fps = 20;
  int64_t target_bitrate_bps = 1'000'000;
  // 0 means an infinite GOP: only frame 0 (and explicitly requested frames)
  // are keyframes.
  int keyframe_interval = 0;
  double keyframe_ratio = 4.0;
  SimDuration encode_latency_us = 1000;
  // Relative size noise for delta frames, in [0, 1).
  double jitter = 0.0;
  int64_t min_bitrate_bps = kMinBitrateBps;
  int64_t max_bitrate_bps = kMaxBitrateBps;

  // Throws ConfigError on violated invariants.
  void Validate() const;
};

struct MediaFrame {
  uint64_t frame_id = 0;
  SimTime capture_time = 0;
  SimTime encode_done_time = 0;
  int64_t size = 0;
  bool is_keyframe = false;
};

// Abstract constant-bitrate video encoder. Every frame adds target/fps bits
// to a byte budget; frame sizes drain it. The budget keeps its rounding
// remainder, so long windows at a constant rate carry no drift. A keyframe
// overdraws the budget by (keyframe_ratio - 1) frames, which the following
// delta frames repay by shrinking, down to 1/kMinDeltaDivisor of nominal.
class Encoder {
 public:
  Encoder(const EncoderConfig& config, RngStream rng);

  // Clamps into [min, max] and returns the applied rate. The frame being
  // emitted at the same instant is unaffected; the next one uses the rate.
  // Throws ConfigError for non-positive rates.
  int64_t SetTargetBitrate(int64_t rate_bps);
  int64_t target_bitrate_bps() const { return target_bps_; }

  // Forces the next frame to be a keyframe (PLI handling).
  void RequestKeyframe() { keyframe_requested_ = true; }

  // `now` is the capture time; it must be strictly increasing.
  MediaFrame EmitFrame(SimTime now);

  SimDuration EncodeLatencyOf(const MediaFrame& frame) const;
  SimDuration frame_interval_us() const;
  const EncoderConfig& config() const { return config_; }
  uint64_t frames_emitted() const { return next_frame_id_; }
  uint64_t keyframes_emitted() const { return keyframes_; }

 private:
  EncoderConfig config_;
  RngStream rng_;
  int64_t target_bps_;
  // Budget in units of 1/(8*fps) byte, i.e. one unit per bit-per-second of
  // rate per frame.
  int64_t budget_ = 0;
  uint64_t next_frame_id_ = 0;
  std::optional<SimTime> last_capture_;
  bool keyframe_requested_ = false;
  uint64_t keyframes_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_MEDIA_ENCODER_H_
