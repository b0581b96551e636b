#include "rtcnetlab/receiver/jitter_buffer.h"

#include <algorithm>

namespace rtcnetlab {

void JitterBufferConfig::Validate() const {
  if (playout_delay_us < 0) throw ConfigError("receiver.playout_delay_ms must be >= 0");
  if (max_stall_us < 0) throw ConfigError("receiver.max_stall_ms must be >= 0");
  if (catchup_step_us < 0) throw ConfigError("jitter buffer catch-up step must be >= 0");
  if (decode_latency_us < 0) throw ConfigError("decode latency must be >= 0");
  if (keyframe_request_interval_us <= 0) {
    throw ConfigError("keyframe request interval must be > 0");
  }
}

JitterBuffer::JitterBuffer(const JitterBufferConfig& config) : config_(config) {
  config_.Validate();
}

void JitterBuffer::ExpectFrame(const ExpectedFrame& frame) {
  if (!expected_.empty() && frame.frame_id <= expected_.back().frame_id) {
    throw SimulationError("frames must be announced in increasing id order");
  }
  expected_.push_back(frame);
}

InsertResult JitterBuffer::InsertPacket(const RtpPacket& packet, SimTime arrival,
                                        SimDuration transmission) {
  if (packet.frame_id < next_undecided_) {
    ++late_packets_;
    return InsertResult::kLate;
  }
  FrameState& state = frames_[packet.frame_id];
  state.packets_in_frame = packet.packets_in_frame;
  state.is_keyframe = packet.protects_keyframe;
  auto [it, inserted] = state.packets.emplace(
      packet.index_in_frame,
      Received{packet.stream_seq, arrival, transmission, packet.payload_size});
  if (!inserted) return InsertResult::kDuplicate;
  if (static_cast<int>(state.packets.size()) == state.packets_in_frame) {
    state.completion = arrival;
    state.critical_transmission = transmission;
  }
  return InsertResult::kAccepted;
}

std::vector<PlayoutEvent> JitterBuffer::Advance(SimTime now) {
  std::vector<PlayoutEvent> out;
  while (!expected_.empty()) {
    const ExpectedFrame expected = expected_.front();
    const SimTime nominal = expected.capture_time + config_.playout_delay_us;
    const SimTime target = nominal + offset_;
    const SimDuration offset_before = offset_;
    if (now < target) break;
    auto it = frames_.find(expected.frame_id);
    FrameState* state = it == frames_.end() ? nullptr : &it->second;
    const bool complete = state && state->completion.has_value();
    if (complete) {
      SimTime play_at = target;
      if (*state->completion > target) {
        play_at = *state->completion;
        offset_ = play_at - nominal;
      } else {
        offset_ = std::max<SimDuration>(0, offset_ - config_.catchup_step_us);
      }
      out.push_back(Decide(expected, state, play_at, true));
    } else {
      const SimTime limit = nominal + config_.max_stall_us;
      if (now < limit) break;
      offset_ = config_.max_stall_us;
      out.push_back(Decide(expected, state, std::max(target, limit), false));
    }
    out.back().stall_us = std::max<SimDuration>(0, offset_ - offset_before);
    if (it != frames_.end()) frames_.erase(it);
    expected_.pop_front();
  }
  return out;
}

std::optional<SimTime> JitterBuffer::NextDeadline() const {
  if (expected_.empty()) return std::nullopt;
  const ExpectedFrame& expected = expected_.front();
  const SimTime nominal = expected.capture_time + config_.playout_delay_us;
  auto it = frames_.find(expected.frame_id);
  if (it != frames_.end() && it->second.completion) {
    return std::max(nominal + offset_, *it->second.completion);
  }
  return std::max(nominal + offset_, nominal + config_.max_stall_us);
}

PlayoutEvent JitterBuffer::Decide(const ExpectedFrame& expected, FrameState* state,
                                  SimTime decided_at, bool complete) {
  PlayoutEvent event;
  event.frame_id = expected.frame_id;
  event.decided_at = decided_at;
  event.packet_count = state ? state->packets_in_frame : expected.packet_count;
  event.is_keyframe = state && state->is_keyframe;
  next_undecided_ = expected.frame_id + 1;

  if (state) {
    for (const auto& [index, received] : state->packets) {
      event.packets.push_back({received.arrival, received.payload_bytes});
    }
    // Highest sequence number of the frame, known from any received packet.
    const auto& [index, any] = *state->packets.begin();
    const uint16_t last_seq =
        static_cast<uint16_t>(any.seq + (state->packets_in_frame - 1 - index));
    decided_up_to_ = last_seq;
  }
  event.missing_packets =
      event.packet_count - (state ? static_cast<int>(state->packets.size()) : 0);

  const bool decodable = complete && (event.is_keyframe || chain_ok_);
  if (decodable) {
    event.kind = PlayoutEvent::Kind::kPlayed;
    event.playout_time = decided_at + config_.decode_latency_us;
    chain_ok_ = true;
    LatencyBreakdown& latency = event.latency;
    latency.processing = expected.encode_done_time - expected.capture_time;
    latency.transmission = state->critical_transmission;
    latency.decoding = event.playout_time - *state->completion;
    latency.queuing = event.playout_time - expected.capture_time -
                      latency.processing - latency.transmission - latency.decoding;
    for (const auto& [index, received] : state->packets) {
      const int64_t key = unwrapper_.Unwrap(received.seq);
      if (key <= last_released_) ++order_violations_;
      last_released_ = std::max(last_released_, key);
      if (on_release_) on_release_(received.seq);
    }
    if (event.is_keyframe) keyframe_seq_ = state->packets.begin()->second.seq;
  } else {
    event.kind = PlayoutEvent::Kind::kSkipped;
    event.undecodable = complete;
    chain_ok_ = false;
  }

  if (!chain_ok_ && config_.keyframe_request_enabled &&
      (!last_keyframe_request_ ||
       decided_at - *last_keyframe_request_ >= config_.keyframe_request_interval_us)) {
    event.request_keyframe = true;
    last_keyframe_request_ = decided_at;
  }
  return event;
}

}  // namespace rtcnetlab
