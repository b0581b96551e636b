#include "rtcnetlab/receiver/fec_receiver.h"

#include <algorithm>

#include "rtcnetlab/reliability/fec.h"

namespace rtcnetlab {

FecReceiver::FecReceiver(int64_t history_span) : history_span_(history_span) {}

uint64_t FecReceiver::unrecoverable_groups() const { return pending_fec_.size(); }

void FecReceiver::Evict() {
  while (!media_.empty() && newest_ - media_.begin()->first > history_span_) {
    media_.erase(media_.begin());
  }
  while (!pending_fec_.empty() &&
         newest_ - pending_fec_.begin()->first > history_span_) {
    pending_fec_.erase(pending_fec_.begin());
  }
}

std::optional<RtpPacket> FecReceiver::TryRepair(const RtpPacket& fec) {
  std::vector<RtpPacket> survivors;
  for (uint16_t seq : fec.covered_seqs) {
    auto it = media_.find(unwrapper_.Peek(seq));
    if (it != media_.end()) survivors.push_back(it->second);
  }
  return RecoverWithFec(fec, survivors);
}

std::vector<RtpPacket> FecReceiver::OnMediaPacket(const RtpPacket& packet) {
  const int64_t key = unwrapper_.Unwrap(packet.stream_seq);
  newest_ = std::max(newest_, key);
  media_.emplace(key, packet);
  std::vector<RtpPacket> out;
  // A group covering this packet may now be down to one hole.
  auto it = pending_fec_.upper_bound(key);
  while (it != pending_fec_.begin()) {
    --it;
    const RtpPacket& fec = it->second;
    const int64_t first = it->first;
    const int64_t last = first + static_cast<int64_t>(fec.covered_seqs.size()) - 1;
    if (last < key) break;
    if (auto recovered = TryRepair(fec)) {
      media_.emplace(unwrapper_.Peek(recovered->stream_seq), *recovered);
      ++recovered_;
      out.push_back(std::move(*recovered));
      pending_fec_.erase(it);
    }
    break;
  }
  Evict();
  return out;
}

std::vector<RtpPacket> FecReceiver::OnFecPacket(const RtpPacket& fec) {
  std::vector<RtpPacket> out;
  if (fec.covered_seqs.empty()) return out;
  const int64_t first = unwrapper_.Peek(fec.covered_seqs.front());
  bool all_present = true;
  for (uint16_t seq : fec.covered_seqs) {
    if (!media_.count(unwrapper_.Peek(seq))) all_present = false;
  }
  if (all_present) return out;
  if (auto recovered = TryRepair(fec)) {
    media_.emplace(unwrapper_.Peek(recovered->stream_seq), *recovered);
    ++recovered_;
    out.push_back(std::move(*recovered));
    return out;
  }
  pending_fec_.emplace(first, fec);
  Evict();
  return out;
}

}  // namespace rtcnetlab
