#include "rtcnetlab/media/encoder.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace rtcnetlab {
namespace {

int64_t FloorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void EncoderConfig::Validate() const {
  if (fps <= 0) throw ConfigError("encoder.fps must be > 0");
  if (min_bitrate_bps <= 0 || min_bitrate_bps > max_bitrate_bps) {
    throw ConfigError("encoder bitrate bounds must satisfy 0 < min <= max");
  }
  if (target_bitrate_bps < min_bitrate_bps ||
      target_bitrate_bps > max_bitrate_bps) {
    throw ConfigError("encoder.bitrate_bps must lie in [" +
                      std::to_string(min_bitrate_bps) + ", " +
                      std::to_string(max_bitrate_bps) + "]");
  }
  if (keyframe_interval < 0) {
    throw ConfigError("encoder.keyframe_interval must be >= 0 (0 = infinite)");
  }
  if (!(keyframe_ratio >= 1.0)) {
    throw ConfigError("encoder.keyframe_ratio must be >= 1");
  }
  if (encode_latency_us < 0) {
    throw ConfigError("encoder.encode_latency_us must be >= 0");
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw ConfigError("encoder.jitter must lie in [0, 1)");
  }
}

Encoder::Encoder(const EncoderConfig& config, RngStream rng)
    : config_(config), rng_(std::move(rng)) {
  config_.Validate();
  target_bps_ = config_.target_bitrate_bps;
}

int64_t Encoder::SetTargetBitrate(int64_t rate_bps) {
  if (rate_bps <= 0) throw ConfigError("target bitrate must be positive");
  target_bps_ =
      std::clamp(rate_bps, config_.min_bitrate_bps, config_.max_bitrate_bps);
  return target_bps_;
}

SimDuration Encoder::frame_interval_us() const {
  return kMicrosPerSecond / config_.fps;
}

SimDuration Encoder::EncodeLatencyOf(const MediaFrame&) const {
  return config_.encode_latency_us;
}

MediaFrame Encoder::EmitFrame(SimTime now) {
  if (last_capture_ && now <= *last_capture_) {
    throw SimulationError("frame capture times must be strictly increasing");
  }
  last_capture_ = now;

  const int64_t units_per_byte = 8 * static_cast<int64_t>(config_.fps);
  budget_ += target_bps_;
  const int64_t nominal = std::max<int64_t>(1, target_bps_ / units_per_byte);

  const bool periodic_key =
      config_.keyframe_interval > 0 &&
      next_frame_id_ % static_cast<uint64_t>(config_.keyframe_interval) == 0;
  const bool is_key = next_frame_id_ == 0 || periodic_key || keyframe_requested_;
  keyframe_requested_ = false;

  int64_t size;
  if (is_key) {
    size = std::max<int64_t>(
        1, std::llround(config_.keyframe_ratio * static_cast<double>(nominal)));
    ++keyframes_;
  } else {
    const int64_t available = FloorDiv(budget_, units_per_byte);
    size = std::max<int64_t>(available, nominal / kMinDeltaDivisor);
    if (config_.jitter > 0.0) {
      const double noise = rng_.Uniform(-config_.jitter, config_.jitter);
      size = std::llround(static_cast<double>(size) * (1.0 + noise));
    }
    size = std::max<int64_t>(1, size);
  }
  budget_ -= size * units_per_byte;

  MediaFrame frame;
  frame.frame_id = next_frame_id_++;
  frame.capture_time = now;
  frame.encode_done_time = now + config_.encode_latency_us;
  frame.size = size;
  frame.is_keyframe = is_key;
  return frame;
}

}  // namespace rtcnetlab
