#include "rtcnetlab/reliability/fec.h"

#include <algorithm>
#include <memory>

namespace rtcnetlab {

void FecConfig::Validate() const {
  if (group_size_delta < 1 || group_size_key < 1) {
    throw ConfigError("FEC group sizes must be >= 1");
  }
  if (group_size_key > group_size_delta) {
    throw ConfigError("reliability.fec_group_key must not exceed fec_group_delta");
  }
}

RtpPacket MakeFecPacket(std::span<const RtpPacket> group, uint64_t group_id,
                        uint16_t fec_seq) {
  if (group.empty()) throw SimulationError("FEC group must cover >= 1 packet");
  int64_t max_len = 0;
  for (const RtpPacket& p : group) max_len = std::max(max_len, p.payload_size);

  auto parity = std::make_shared<std::vector<uint8_t>>(static_cast<size_t>(max_len), 0);
  RtpPacket fec;
  for (const RtpPacket& p : group) {
    if (p.frame_id != group.front().frame_id) {
      throw SimulationError("FEC group spans frames");
    }
    auto bytes = p.payload_view();
    for (size_t i = 0; i < bytes.size(); ++i) (*parity)[i] ^= bytes[i];
    fec.length_recovery ^= p.payload_size;
    fec.marker_recovery ^= p.marker;
    fec.covered_seqs.push_back(p.stream_seq);
  }
  const RtpPacket& first = group.front();
  fec.stream_seq = fec_seq;
  fec.rtp_timestamp = first.rtp_timestamp;
  fec.frame_id = first.frame_id;
  fec.payload_size = max_len;
  fec.header_size = first.header_size;
  fec.is_fec = true;
  fec.protects_keyframe = first.protects_keyframe;
  fec.fec_group_id = group_id;
  fec.packets_in_frame = first.packets_in_frame;
  fec.index_in_frame = first.index_in_frame;
  fec.capture_time = first.capture_time;
  fec.enqueue_time = group.back().enqueue_time;
  fec.payload = std::move(parity);
  return fec;
}

std::optional<RtpPacket> RecoverWithFec(const RtpPacket& fec,
                                        std::span<const RtpPacket> survivors) {
  std::vector<uint16_t> missing;
  for (uint16_t seq : fec.covered_seqs) {
    const bool present = std::any_of(survivors.begin(), survivors.end(),
                                     [seq](const RtpPacket& p) {
                                       return p.stream_seq == seq;
                                     });
    if (!present) missing.push_back(seq);
  }
  if (missing.size() != 1) return std::nullopt;

  std::vector<uint8_t> bytes(fec.payload_view().begin(), fec.payload_view().end());
  int64_t length = fec.length_recovery;
  bool marker = fec.marker_recovery;
  for (const RtpPacket& p : survivors) {
    if (std::find(fec.covered_seqs.begin(), fec.covered_seqs.end(),
                  p.stream_seq) == fec.covered_seqs.end()) {
      continue;
    }
    auto view = p.payload_view();
    for (size_t i = 0; i < view.size() && i < bytes.size(); ++i) bytes[i] ^= view[i];
    length ^= p.payload_size;
    marker ^= p.marker;
  }
  if (length < 0 || length > static_cast<int64_t>(bytes.size())) return std::nullopt;
  bytes.resize(static_cast<size_t>(length));

  RtpPacket recovered;
  recovered.stream_seq = missing.front();
  recovered.rtp_timestamp = fec.rtp_timestamp;
  recovered.frame_id = fec.frame_id;
  recovered.payload_size = length;
  recovered.header_size = fec.header_size;
  recovered.marker = marker;
  recovered.protects_keyframe = fec.protects_keyframe;
  recovered.packets_in_frame = fec.packets_in_frame;
  // Group members are consecutive in sequence order.
  recovered.index_in_frame =
      fec.index_in_frame + static_cast<uint16_t>(recovered.stream_seq -
                                                 fec.covered_seqs.front());
  recovered.frame_start = recovered.index_in_frame == 0;
  recovered.capture_time = fec.capture_time;
  recovered.payload = std::make_shared<const std::vector<uint8_t>>(std::move(bytes));
  return recovered;
}

FecEncoder::FecEncoder(const FecConfig& config) : config_(config) {
  config_.Validate();
}

std::optional<RtpPacket> FecEncoder::AddMediaPacket(const RtpPacket& packet) {
  if (!config_.enabled || packet.is_fec || packet.is_retransmission) {
    return std::nullopt;
  }
  if (!pending_.empty() && pending_.front().frame_id != packet.frame_id) {
    // The previous frame ended without a marker reaching us; never merge.
    pending_.clear();
  }
  pending_.push_back(packet);
  const size_t limit = static_cast<size_t>(
      packet.protects_keyframe ? config_.group_size_key : config_.group_size_delta);
  if (pending_.size() < limit && !packet.marker) return std::nullopt;

  RtpPacket fec = MakeFecPacket(pending_, next_group_id_++, next_fec_seq_++);
  pending_.clear();
  return fec;
}

}  // namespace rtcnetlab
