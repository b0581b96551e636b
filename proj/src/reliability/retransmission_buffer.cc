#include "rtcnetlab/reliability/retransmission_buffer.h"

#include <algorithm>

namespace rtcnetlab {

void RetransmissionConfig::Validate() const {
  if (max_age_us <= 0) throw ConfigError("reliability.rtx_age_ms must be > 0");
  if (max_retransmissions < 0) {
    throw ConfigError("reliability.rtx_max_count must be >= 0");
  }
  if (!(bandwidth_fraction > 0.0 && bandwidth_fraction <= 1.0)) {
    throw ConfigError("reliability.rtx_bandwidth_fraction must lie in (0, 1]");
  }
  if (max_seq_span <= 0 || max_seq_span >= 32768) {
    throw ConfigError("retransmission sequence span must lie in (0, 32768)");
  }
}

RetransmissionBuffer::RetransmissionBuffer(const RetransmissionConfig& config)
    : config_(config) {
  config_.Validate();
}

void RetransmissionBuffer::Store(const RtpPacket& packet, SimTime now) {
  if (packet.is_fec) return;
  const int64_t key = unwrapper_.Unwrap(packet.stream_seq);
  newest_ = std::max(newest_, key);
  auto [it, inserted] = entries_.try_emplace(key);
  if (inserted) {
    it->second.packet = packet;
    it->second.packet.is_retransmission = false;
    it->second.first_send_time = now;
  }
  Evict(now);
}

void RetransmissionBuffer::Evict(SimTime now) {
  while (!entries_.empty()) {
    const auto& [key, entry] = *entries_.begin();
    const bool too_far = newest_ - key >= config_.max_seq_span;
    const bool too_old = now - entry.first_send_time > config_.max_age_us;
    if (!too_far && !too_old) break;
    entries_.erase(entries_.begin());
  }
}

int64_t RetransmissionBuffer::RecentRetransmitBytes(SimTime now) {
  while (!recent_retransmits_.empty() &&
         recent_retransmits_.front().first <= now - kMicrosPerSecond) {
    recent_bytes_ -= recent_retransmits_.front().second;
    recent_retransmits_.pop_front();
  }
  return recent_bytes_;
}

std::vector<RtpPacket> RetransmissionBuffer::HandleNack(
    std::span<const uint16_t> seqs, SimTime now, SimDuration rtt_estimate,
    int64_t bandwidth_estimate_bps) {
  std::vector<RtpPacket> out;
  Evict(now);
  const double budget_bytes =
      config_.bandwidth_fraction * static_cast<double>(bandwidth_estimate_bps) / 8.0;
  for (uint16_t seq : seqs) {
    ++stats_.requested;
    auto it = entries_.find(unwrapper_.Peek(seq));
    if (it == entries_.end()) {
      ++stats_.skipped_not_buffered;
      continue;
    }
    Entry& entry = it->second;
    if (entry.last_retransmit_time &&
        now - *entry.last_retransmit_time < rtt_estimate) {
      ++stats_.skipped_within_rtt;
      continue;
    }
    if (entry.retransmit_count >= config_.max_retransmissions) {
      ++stats_.skipped_max_count;
      continue;
    }
    const int64_t bytes = entry.packet.size_bytes();
    if (static_cast<double>(RecentRetransmitBytes(now) + bytes) > budget_bytes) {
      ++stats_.skipped_bandwidth;
      continue;
    }
    ++entry.retransmit_count;
    entry.last_retransmit_time = now;
    recent_retransmits_.emplace_back(now, bytes);
    recent_bytes_ += bytes;
    ++stats_.retransmitted;

    RtpPacket copy = entry.packet;
    copy.is_retransmission = true;
    copy.transport_seq = -1;
    copy.enqueue_time = now;
    out.push_back(std::move(copy));
  }
  return out;
}

bool RetransmissionBuffer::Contains(uint16_t seq) const {
  return entries_.count(unwrapper_.Peek(seq)) > 0;
}

std::optional<int> RetransmissionBuffer::RetransmitCount(uint16_t seq) const {
  auto it = entries_.find(unwrapper_.Peek(seq));
  if (it == entries_.end()) return std::nullopt;
  return it->second.retransmit_count;
}

}  // namespace rtcnetlab
