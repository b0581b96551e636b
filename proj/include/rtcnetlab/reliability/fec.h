#ifndef RTCNETLAB_RELIABILITY_FEC_H_
#define RTCNETLAB_RELIABILITY_FEC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rtcnetlab/rtp/rtp_packet.h"

namespace rtcnetlab {

struct FecConfig {
  bool enabled = false;
  // Media packets per parity packet.
  int group_size_delta = 10;
  int group_size_key = 4;

  void Validate() const;
};

// Builds a single-parity packet over `group`: the payload is the XOR of the
// media payloads zero-padded to the longest one. Length and marker fields
// are XOR-protected the same way. All members must belong to one frame.
RtpPacket MakeFecPacket(std::span<const RtpPacket> group, uint64_t group_id,
                        uint16_t fec_seq);

// Reconstructs the one covered media packet absent from `survivors`.
// Returns nullopt unless exactly one covered packet is missing.
std::optional<RtpPacket> RecoverWithFec(const RtpPacket& fec,
                                        std::span<const RtpPacket> survivors);

// Sender-side FEC generator with uneven protection: keyframe packets are
// grouped by group_size_key, delta packets by group_size_delta. Groups close
// on reaching their size or at the end of a frame; they never span frames.
class FecEncoder {
 public:
  explicit FecEncoder(const FecConfig& config);

  // Feeds one media packet in send order; returns the parity packet if this
  // packet closed a group.
  std::optional<RtpPacket> AddMediaPacket(const RtpPacket& packet);

  uint64_t fec_packets() const { return next_group_id_; }
  const FecConfig& config() const { return config_; }

 private:
  FecConfig config_;
  std::vector<RtpPacket> pending_;
  uint64_t next_group_id_ = 0;
  uint16_t next_fec_seq_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RELIABILITY_FEC_H_
