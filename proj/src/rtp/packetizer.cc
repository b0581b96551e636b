#include "rtcnetlab/rtp/packetizer.h"

#include <algorithm>
#include <cstring>

#include "rtcnetlab/sim/random.h"

namespace rtcnetlab {

PayloadBytes MakeSyntheticPayload(uint64_t key, int64_t size) {
  auto bytes = std::make_shared<std::vector<uint8_t>>(static_cast<size_t>(size));
  uint64_t state = SplitMix64(key);
  size_t i = 0;
  const size_t n = bytes->size();
  while (i < n) {
    state = SplitMix64(state);
    const size_t chunk = std::min<size_t>(8, n - i);
    std::memcpy(bytes->data() + i, &state, chunk);
    i += chunk;
  }
  return bytes;
}

void RtpConfig::Validate() const {
  if (header_size <= 0) throw ConfigError("rtp.header_size must be > 0");
  if (mtu <= header_size) {
    throw ConfigError("rtp.mtu must exceed the RTP header size");
  }
  if (!(pacing_multiplier > 0)) {
    throw ConfigError("rtp.pacing_multiplier must be > 0");
  }
  if (timestamp_clock_hz <= 0) {
    throw ConfigError("rtp.timestamp_clock_hz must be > 0");
  }
}

uint32_t RtpTimestampOf(SimTime capture_time, uint32_t session_offset,
                        int64_t clock_hz) {
  // Split to keep the product within 64 bits for long runs.
  const int64_t seconds = capture_time / kMicrosPerSecond;
  const int64_t micros = capture_time % kMicrosPerSecond;
  const uint64_t ticks = static_cast<uint64_t>(seconds * clock_hz) +
                         static_cast<uint64_t>(micros * clock_hz / kMicrosPerSecond);
  return static_cast<uint32_t>(session_offset + ticks);
}

Packetizer::Packetizer(const RtpConfig& config, uint32_t timestamp_offset,
                       uint16_t initial_seq, uint64_t payload_key)
    : config_(config),
      timestamp_offset_(timestamp_offset),
      next_seq_(initial_seq),
      payload_key_(payload_key) {
  config_.Validate();
}

std::vector<RtpPacket> Packetizer::Packetize(const MediaFrame& frame) {
  if (frame.size <= 0) throw SimulationError("cannot packetize an empty frame");
  const int64_t max_payload = this->max_payload();
  const int64_t count = (frame.size + max_payload - 1) / max_payload;
  const uint32_t timestamp = RtpTimestampOf(
      frame.capture_time, timestamp_offset_, config_.timestamp_clock_hz);

  std::vector<RtpPacket> packets;
  packets.reserve(static_cast<size_t>(count));
  int64_t remaining = frame.size;
  for (int64_t i = 0; i < count; ++i) {
    RtpPacket packet;
    packet.stream_seq = next_seq_++;
    packet.rtp_timestamp = timestamp;
    packet.frame_id = frame.frame_id;
    packet.payload_size = std::min(remaining, max_payload);
    packet.header_size = config_.header_size;
    packet.marker = (i == count - 1);
    packet.frame_start = (i == 0);
    packet.index_in_frame = static_cast<int>(i);
    packet.packets_in_frame = static_cast<int>(count);
    packet.protects_keyframe = frame.is_keyframe;
    packet.capture_time = frame.capture_time;
    packet.enqueue_time = frame.encode_done_time;
    packet.payload = MakeSyntheticPayload(payload_key_ ^ (packets_made_++ << 1),
                                          packet.payload_size);
    remaining -= packet.payload_size;
    packets.push_back(std::move(packet));
  }
  return packets;
}

}  // namespace rtcnetlab
