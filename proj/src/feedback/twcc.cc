#include "rtcnetlab/feedback/twcc.h"

#include <algorithm>

namespace rtcnetlab {

int64_t ToTwccTicks(SimTime t) {
  // Round half away from zero on the integer grid.
  if (t >= 0) return (t + kTwccDeltaTick / 2) / kTwccDeltaTick;
  return -((-t + kTwccDeltaTick / 2) / kTwccDeltaTick);
}

bool TwccRecorder::OnPacket(int64_t transport_seq, SimTime arrival) {
  if (transport_seq < next_base_) {
    ++late_;
    return false;
  }
  return pending_.emplace(transport_seq, arrival).second;
}

std::optional<TwccFeedback> TwccRecorder::BuildFeedback(SimTime now) {
  if (pending_.empty()) return std::nullopt;
  TwccFeedback feedback;
  feedback.feedback_seq = next_feedback_seq_++;
  feedback.base_seq = next_base_;
  feedback.feedback_send_time = now;
  const int64_t last = pending_.rbegin()->first;
  feedback.statuses.reserve(static_cast<size_t>(last - next_base_ + 1));
  std::optional<int64_t> previous_ticks;
  auto it = pending_.begin();
  for (int64_t seq = next_base_; seq <= last; ++seq) {
    TwccStatus status;
    status.transport_seq = seq;
    if (it != pending_.end() && it->first == seq) {
      const int64_t ticks = ToTwccTicks(it->second);
      if (!previous_ticks) {
        feedback.reference_ticks = ticks;
        previous_ticks = ticks;
      }
      status.received = true;
      status.delta_ticks = ticks - *previous_ticks;
      previous_ticks = ticks;
      ++it;
    }
    feedback.statuses.push_back(status);
  }
  next_base_ = last + 1;
  pending_.clear();
  return feedback;
}

std::vector<std::pair<int64_t, SimTime>> ReconstructArrivals(const TwccFeedback& feedback) {
  std::vector<std::pair<int64_t, SimTime>> out;
  int64_t ticks = feedback.reference_ticks;
  for (const TwccStatus& status : feedback.statuses) {
    if (!status.received) continue;
    ticks += status.delta_ticks;
    out.emplace_back(status.transport_seq, ticks * kTwccDeltaTick);
  }
  return out;
}

void TransportFeedbackAdapter::OnPacketSent(const SentPacketInfo& info) {
  history_[info.transport_seq] = info;
}

PacketResult TransportFeedbackAdapter::Take(int64_t seq, PacketResult::Status status,
                                            SimTime arrival) {
  PacketResult result;
  result.status = status;
  result.arrival = arrival;
  auto it = history_.find(seq);
  if (it != history_.end()) {
    result.sent = it->second;
    history_.erase(it);
  } else {
    result.sent.transport_seq = seq;
  }
  return result;
}

std::vector<PacketResult> TransportFeedbackAdapter::OnFeedback(const TwccFeedback& feedback) {
  std::vector<PacketResult> out;
  if (last_feedback_seq_ && feedback.feedback_seq != *last_feedback_seq_ + 1) {
    lost_feedback_ += feedback.feedback_seq - *last_feedback_seq_ - 1;
  }
  last_feedback_seq_ = feedback.feedback_seq;
  for (int64_t seq = covered_until_; seq < feedback.base_seq; ++seq) {
    out.push_back(Take(seq, PacketResult::Status::kUnknown, 0));
    ++unknown_;
  }
  const auto arrivals = ReconstructArrivals(feedback);
  auto arrival = arrivals.begin();
  for (const TwccStatus& status : feedback.statuses) {
    SimTime at = 0;
    if (status.received) at = (arrival++)->second;
    if (status.transport_seq < covered_until_) continue;
    out.push_back(Take(status.transport_seq,
                       status.received ? PacketResult::Status::kReceived
                                       : PacketResult::Status::kLost,
                       at));
  }
  covered_until_ = std::max(covered_until_, feedback.last_seq() + 1);
  return out;
}

}  // namespace rtcnetlab
