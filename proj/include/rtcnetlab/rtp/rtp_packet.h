#ifndef RTCNETLAB_RTP_RTP_PACKET_H_
#define RTCNETLAB_RTP_RTP_PACKET_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

// 12-byte RTP header plus an 8-byte extension block carrying the
// transport-wide sequence number.
constexpr int kDefaultRtpHeaderSize = 20;
constexpr int kDefaultMtu = 1250;

// Immutable payload bytes shared between copies of a packet (retransmission
// buffer, FEC encoder, network queues).
using PayloadBytes = std::shared_ptr<const std::vector<uint8_t>>;

// Deterministic pseudo-random payload for a media packet.
PayloadBytes MakeSyntheticPayload(uint64_t key, int64_t size);

struct RtpPacket {
  uint16_t stream_seq = 0;
  // Assigned when the packet is handed to the network; -1 before.
  int64_t transport_seq = -1;
  uint32_t rtp_timestamp = 0;
  uint64_t frame_id = 0;
  int64_t payload_size = 0;
  int header_size = kDefaultRtpHeaderSize;
  bool marker = false;
  bool is_retransmission = false;
  bool is_fec = false;
  bool protects_keyframe = false;
  std::optional<uint64_t> fec_group_id;

  // Frame layout, known to any depacketizer from the start/end bits; kept
  // explicit so the receiver can account frames whose packets all vanished.
  bool frame_start = false;
  int index_in_frame = 0;
  int packets_in_frame = 1;

  // FEC-only: protected media sequence numbers and the XOR of the protected
  // length and marker fields.
  std::vector<uint16_t> covered_seqs;
  int64_t length_recovery = 0;
  bool marker_recovery = false;

  PayloadBytes payload;

  SimTime capture_time = 0;
  SimTime enqueue_time = 0;
  SimTime send_time = 0;
  // Set by the link when serialization starts.
  SimTime service_start_time = 0;

  int64_t size_bytes() const { return payload_size + header_size; }
  int64_t size_bits() const { return size_bytes() * 8; }
  std::span<const uint8_t> payload_view() const {
    if (!payload) return {};
    return {payload->data(), payload->size()};
  }
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RTP_RTP_PACKET_H_
