#ifndef RTCNETLAB_RTP_PACKETIZER_H_
#define RTCNETLAB_RTP_PACKETIZER_H_

#include <cstdint>
#include <vector>

#include "rtcnetlab/media/encoder.h"
#include "rtcnetlab/rtp/rtp_packet.h"

namespace rtcnetlab {

struct RtpConfig {
  int mtu = kDefaultMtu;
  int header_size = kDefaultRtpHeaderSize;
  double pacing_multiplier = 1.25;
  int64_t timestamp_clock_hz = 90000;

  void Validate() const;
};

// (session_offset + capture_time * clock_hz / 1e6) mod 2^32.
uint32_t RtpTimestampOf(SimTime capture_time, uint32_t session_offset,
                        int64_t clock_hz = 90000);

// Splits frames into MTU-sized RTP packets. Payloads are filled to the
// maximum size except for the last packet of a frame. Packetization happens
// as soon as the frame is encoded (no aggregation across frames).
class Packetizer {
 public:
  // Throws ConfigError when mtu <= header_size.
  Packetizer(const RtpConfig& config, uint32_t timestamp_offset,
             uint16_t initial_seq = 0, uint64_t payload_key = 0);

  std::vector<RtpPacket> Packetize(const MediaFrame& frame);

  int max_payload() const { return config_.mtu - config_.header_size; }
  uint32_t timestamp_offset() const { return timestamp_offset_; }
  uint16_t next_seq() const { return next_seq_; }

 private:
  RtpConfig config_;
  uint32_t timestamp_offset_;
  uint16_t next_seq_;
  uint64_t payload_key_;
  uint64_t packets_made_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RTP_PACKETIZER_H_
