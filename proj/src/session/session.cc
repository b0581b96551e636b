#include "rtcnetlab/session/session.h"

#include <algorithm>
#include <cmath>

#include "rtcnetlab/scenario/presets.h"
#include "rtcnetlab/sim/random.h"

namespace rtcnetlab {

namespace {

// Sender reports are offset by half a period so each receiver report can
// echo the one before it.
constexpr SimDuration kSenderReportPhase = Millis(500);

EncoderConfig EncoderFor(const Scenario& s) {
  EncoderConfig c = s.encoder;
  c.target_bitrate_bps = ClampBitrate(static_cast<double>(s.controller.start_rate_bps),
                                      c.min_bitrate_bps, c.max_bitrate_bps);
  return c;
}

uint64_t LinkSeed(uint64_t seed, uint64_t index) { return SplitMix64(seed + index); }

int64_t PacingRate(int64_t target_bps, double multiplier) {
  return std::max<int64_t>(1, std::llround(static_cast<double>(target_bps) * multiplier));
}

}  // namespace

std::unique_ptr<RateController> MakeController(const Scenario& scenario) {
  const ControllerConfig& c = scenario.controller;
  switch (c.kind) {
    case ControllerKind::kGcc: {
      GccConfig gcc = c.gcc;
      gcc.start_rate_bps = c.start_rate_bps;
      gcc.min_rate_bps = scenario.encoder.min_bitrate_bps;
      gcc.max_rate_bps = scenario.encoder.max_bitrate_bps;
      return std::make_unique<GccController>(gcc);
    }
    case ControllerKind::kFixed:
      return std::make_unique<FixedController>(c.fixed_rate_bps);
    case ControllerKind::kScripted:
      return std::make_unique<ScriptedController>(c.script);
    case ControllerKind::kBridge:
      return std::make_unique<ExternalController>(c.start_rate_bps);
  }
  throw ConfigError("unhandled controller kind");
}

Session::Session(Scenario scenario, std::unique_ptr<RateController> controller)
    : scenario_((scenario.Validate(), std::move(scenario))),
      controller_(controller ? std::move(controller) : MakeController(scenario_)),
      encoder_(EncoderFor(scenario_), RngStream(scenario_.seed, "encoder")),
      packetizer_(scenario_.rtp,
                  static_cast<uint32_t>(RngStream(scenario_.seed, "rtp.ts").NextU64()),
                  static_cast<uint16_t>(RngStream(scenario_.seed, "rtp.seq").NextU64()),
                  scenario_.seed),
      fec_encoder_(scenario_.fec),
      pacer_(PacingRate(encoder_.target_bitrate_bps(), scenario_.rtp.pacing_multiplier)),
      rtx_buffer_(scenario_.rtx),
      target_bps_(encoder_.target_bitrate_bps()),
      nack_(scenario_.receiver.nack),
      jitter_buffer_(scenario_.receiver.jitter),
      receive_stats_(scenario_.rtp.timestamp_clock_hz) {
  const Scenario& s = scenario_;
  for (size_t i = 0; i < s.links.size(); ++i) {
    auto link = std::make_unique<Link>(loop_, s.links[i], LinkSeed(s.seed, i));
    link->set_on_sent([this](const Datagram& d, SimTime now) {
      if (d.is_rtp()) metrics_.OnNetSent(now);
    });
    link->set_on_drop([this](const Datagram& d, DropReason) {
      if (d.is_rtp()) metrics_.OnNetDropped(d.sent_time);
    });
    link->set_on_deliver(
        [this](Datagram d, SimTime arrival) { OnForwardDelivery(std::move(d), arrival); });
    forward_.push_back(std::move(link));
  }
  const LinkProfile reverse_profile = s.ResolvedReverseLink();
  reverse_ = std::make_unique<Link>(loop_, reverse_profile, LinkSeed(s.seed, 1000));
  reverse_->set_on_deliver(
      [this](Datagram d, SimTime arrival) { OnFeedbackDelivery(std::move(d), arrival); });

  if (s.transport == TransportMode::kTcp) {
    tcp_ = std::make_unique<TcpPipe>(loop_, *forward_[0],
                                     reverse_profile.base_delay_us + s.tcp_ack_delay_us);
    tcp_->set_on_deliver(
        [this](Datagram d, SimTime release) { OnForwardDelivery(std::move(d), release); });
  } else if (forward_.size() > 1) {
    std::vector<Link*> links;
    for (auto& link : forward_) links.push_back(link.get());
    splitter_ = std::make_unique<MultiHomeSplitter>(links, s.multihome_ratio);
  }
  feedback_ = std::make_unique<FeedbackChannel>(
      &loop_, s.feedback.no_cost,
      [this](Datagram d, SimTime now) { reverse_->Transmit(std::move(d), now); },
      [this](Datagram d, SimTime arrival) { OnFeedbackDelivery(std::move(d), arrival); });

  rtt_floor_us_ = std::max<SimDuration>(
      1, SerializationTime(SenderReport{}.size_bytes(), s.links[0].base_capacity_bps) +
             SerializationTime(ReceiverReport{}.size_bytes(),
                               reverse_profile.base_capacity_bps));

  for (auto& link : forward_) link->ScheduleProfileEvents();
  reverse_->ScheduleProfileEvents();

  loop_.Schedule(0, EventKind::kFrameCapture, [this] { OnFrameCapture(); });
  loop_.Schedule(kReceiverTickUs, EventKind::kReceiverTick, [this] { OnReceiverTick(); });
  loop_.Schedule(s.feedback.twcc_period_us, EventKind::kReport, [this] { SendTwcc(); });
  loop_.Schedule(s.feedback.rr_period_us, EventKind::kReport,
                 [this] { SendReceiverReport(); });
  loop_.Schedule(std::min(kSenderReportPhase, s.feedback.rr_period_us / 2),
                 EventKind::kReport, [this] { SendSenderReport(); });
  loop_.Schedule(metrics_.window_us(), EventKind::kMetricsTick, [this] { OnMetricsTick(); });
  target_history_.emplace_back(0, target_bps_);
  ApplyDecision();
}

void Session::RunUntil(SimTime t) {
  const SimTime end = std::min(t, scenario_.duration_us);
  if (end > loop_.now()) loop_.RunUntil(end);
}

void Session::Run() {
  if (finished_) return;
  RunUntil(scenario_.duration_us);
  if (last_tick_ < scenario_.duration_us) {
    ApplyDecision();
    SampleCapacity(loop_.now());
    metrics_.Tick(loop_.now(), last_rtt_ ? static_cast<double>(*last_rtt_) / 1000.0 : 0.0,
                  target_bps_);
    last_tick_ = loop_.now();
  }
  finished_ = true;
}

void Session::ApplyDecision() {
  const SimTime now = loop_.now();
  const RateDecision decision = controller_->Decide(now);
  const int64_t target =
      ClampBitrate(static_cast<double>(decision.target_bps),
                   encoder_.config().min_bitrate_bps, encoder_.config().max_bitrate_bps);
  if (target == target_bps_) return;
  target_bps_ = encoder_.SetTargetBitrate(target);
  pacer_.SetPacingRate(PacingRate(target_bps_, scenario_.rtp.pacing_multiplier), now);
  if (pacer_event_) {
    loop_.Cancel(*pacer_event_);
    pacer_event_.reset();
  }
  SchedulePacer();
  target_history_.emplace_back(now, target_bps_);
}

void Session::SendForward(Datagram datagram, SimTime now) {
  if (tcp_) {
    tcp_->Send(std::move(datagram), now);
  } else if (splitter_) {
    splitter_->Transmit(std::move(datagram), now);
  } else {
    forward_[0]->Transmit(std::move(datagram), now);
  }
}

void Session::OnFrameCapture() {
  const SimTime now = loop_.now();
  const SimDuration backlog =
      SerializationTime(pacer_.queued_bytes(), pacer_.pacing_rate_bps());
  if (backlog > kMaxPacerQueueDelayUs) {
    // Encoder pushback: skipping the frame keeps the reference chain intact
    // and its bits are never added to the budget.
    ++frames_dropped_;
  } else {
    const MediaFrame frame = encoder_.EmitFrame(now);
    loop_.Schedule(frame.encode_done_time, EventKind::kFrameEncoded,
                   [this, frame] { OnFrameEncoded(frame); });
  }
  const SimTime next = now + encoder_.frame_interval_us();
  if (next < scenario_.duration_us) {
    loop_.Schedule(next, EventKind::kFrameCapture, [this] { OnFrameCapture(); });
  }
}

void Session::OnFrameEncoded(const MediaFrame& frame) {
  const SimTime now = loop_.now();
  if (frame.is_keyframe) last_keyframe_time_ = now;
  std::vector<RtpPacket> packets = packetizer_.Packetize(frame);
  // The receiver learns frame boundaries from the RTP timestamps and marker
  // bits; announcing the frame here lets it account frames lost entirely.
  jitter_buffer_.ExpectFrame({frame.frame_id, frame.capture_time, frame.encode_done_time,
                              static_cast<int>(packets.size())});
  for (RtpPacket& packet : packets) {
    std::optional<RtpPacket> parity;
    if (scenario_.fec.enabled) parity = fec_encoder_.AddMediaPacket(packet);
    pacer_.Enqueue(std::move(packet), now);
    if (parity) pacer_.Enqueue(std::move(*parity), now);
  }
  SchedulePacer();
}

void Session::SchedulePacer() {
  if (pacer_event_ || pacer_.empty()) return;
  const SimTime now = loop_.now();
  const SimTime at = std::max(now, pacer_.NextReleaseTime(now).value_or(now));
  pacer_event_ = loop_.Schedule(at, EventKind::kPacerRelease, [this] { OnPacerRelease(); });
}

void Session::OnPacerRelease() {
  pacer_event_.reset();
  const SimTime now = loop_.now();
  RtpPacket packet = pacer_.PopNext(now);
  packet.transport_seq = next_transport_seq_++;
  if (!packet.is_fec && !packet.is_retransmission) {
    if (scenario_.rtx.nack_enabled) rtx_buffer_.Store(packet, now);
    rtcp_sender_.OnMediaSent(packet);
  }
  adapter_.OnPacketSent(
      {packet.transport_seq, now, packet.size_bytes(), packet.is_retransmission});
  metrics_.OnRtpSent(packet, now);
  SendForward(Datagram::Of(std::move(packet)), now);
  SchedulePacer();
}

void Session::SendSenderReport() {
  const SimTime now = loop_.now();
  const uint32_t ts =
      RtpTimestampOf(now, packetizer_.timestamp_offset(), scenario_.rtp.timestamp_clock_hz);
  SendForward(Datagram::Of(rtcp_sender_.BuildSenderReport(now, ts)), now);
  loop_.ScheduleAfter(scenario_.feedback.rr_period_us, EventKind::kReport,
                      [this] { SendSenderReport(); });
}

void Session::OnForwardDelivery(Datagram datagram, SimTime arrival) {
  if (const auto* sr = std::get_if<SenderReport>(&datagram.content)) {
    receive_stats_.OnSenderReport(*sr, arrival);
    return;
  }
  auto* packet = std::get_if<RtpPacket>(&datagram.content);
  if (!packet) return;
  const SimDuration transmission =
      (datagram.departure_time - datagram.service_start_time) + datagram.propagation_us;
  metrics_.OnRtpDelivered(*packet, arrival);
  OnRtp(*packet, arrival, transmission);
}

void Session::OnRtp(const RtpPacket& packet, SimTime arrival, SimDuration transmission) {
  twcc_.OnPacket(packet.transport_seq, arrival);
  if (packet.transport_seq < highest_transport_seq_) {
    ++reordered_arrivals_;
  } else {
    highest_transport_seq_ = packet.transport_seq;
  }
  if (packet.is_fec) {
    if (scenario_.fec.enabled) {
      for (const RtpPacket& recovered : fec_receiver_.OnFecPacket(packet)) {
        HandleMedia(recovered, arrival, transmission, /*recovered=*/true);
      }
    }
  } else {
    HandleMedia(packet, arrival, transmission, /*recovered=*/false);
  }
  SchedulePlayout();
}

void Session::HandleMedia(const RtpPacket& packet, SimTime arrival,
                          SimDuration transmission, bool recovered) {
  if (!recovered && !packet.is_retransmission) receive_stats_.OnPacket(packet, arrival);
  if (scenario_.receiver.nack.enabled) nack_.OnPacket(packet.stream_seq, arrival);
  std::vector<RtpPacket> repaired;
  if (scenario_.fec.enabled) repaired = fec_receiver_.OnMediaPacket(packet);
  if (jitter_buffer_.InsertPacket(packet, arrival, transmission) == InsertResult::kLate) {
    metrics_.OnLatePacket();
  }
  for (const RtpPacket& r : repaired) HandleMedia(r, arrival, transmission, true);
}

void Session::OnReceiverTick() {
  const SimTime now = loop_.now();
  if (scenario_.receiver.nack.enabled) {
    std::vector<uint16_t> seqs = nack_.Process(now);
    if (!seqs.empty()) {
      NackRequest request;
      request.seqs = std::move(seqs);
      request.send_time = now;
      feedback_->Send(Datagram::Of(std::move(request)), now);
    }
  }
  loop_.ScheduleAfter(kReceiverTickUs, EventKind::kReceiverTick, [this] { OnReceiverTick(); });
}

void Session::SendTwcc() {
  const SimTime now = loop_.now();
  if (std::optional<TwccFeedback> fb = twcc_.BuildFeedback(now)) {
    fb->feedback_send_time = now;
    feedback_->Send(Datagram::Of(std::move(*fb)), now);
  }
  loop_.ScheduleAfter(scenario_.feedback.twcc_period_us, EventKind::kReport,
                      [this] { SendTwcc(); });
}

void Session::SendReceiverReport() {
  const SimTime now = loop_.now();
  feedback_->Send(Datagram::Of(receive_stats_.BuildReport(now)), now);
  loop_.ScheduleAfter(scenario_.feedback.rr_period_us, EventKind::kReport,
                      [this] { SendReceiverReport(); });
}

void Session::SchedulePlayout() {
  const std::optional<SimTime> deadline = jitter_buffer_.NextDeadline();
  if (!deadline) {
    if (playout_event_) loop_.Cancel(*playout_event_);
    playout_event_.reset();
    return;
  }
  const SimTime at = std::max(*deadline, loop_.now());
  if (playout_event_ && playout_event_time_ == at) return;
  if (playout_event_) loop_.Cancel(*playout_event_);
  playout_event_time_ = at;
  playout_event_ = loop_.Schedule(at, EventKind::kPlayout, [this] { OnPlayout(); });
}

void Session::OnPlayout() {
  playout_event_.reset();
  const SimTime now = loop_.now();
  for (const PlayoutEvent& event : jitter_buffer_.Advance(now)) {
    metrics_.OnPlayout(event);
    if (event.request_keyframe) {
      KeyframeRequest request;
      request.send_time = now;
      feedback_->Send(Datagram::Of(request), now);
    }
  }
  if (scenario_.receiver.nack.enabled) {
    // Only a newly decodable keyframe is passed on: a stale sequence number
    // would unwrap into the current range after the 16-bit space wraps.
    const std::optional<uint16_t> keyframe_seq = jitter_buffer_.last_decodable_keyframe_seq();
    if (keyframe_seq && keyframe_seq != reported_keyframe_seq_) {
      nack_.OnDecodableKeyframe(*keyframe_seq);
      reported_keyframe_seq_ = keyframe_seq;
    }
    if (auto seq = jitter_buffer_.decided_up_to()) nack_.ClearUpTo(*seq);
  }
  SchedulePlayout();
}

void Session::OnFeedbackDelivery(Datagram datagram, SimTime arrival) {
  const SimTime now = loop_.now();
  if (const auto* rr = std::get_if<ReceiverReport>(&datagram.content)) {
    const std::optional<SimDuration> rtt = ComputeRtt(*rr, arrival, rtt_floor_us_);
    if (rtt) {
      last_rtt_ = rtt;
      rtt_samples_.push_back(*rtt);
    }
    last_jitter_us_ = rr->interarrival_jitter_us;
    controller_->OnReceiverReport(*rr, rtt, now);
    ApplyDecision();
  } else if (const auto* fb = std::get_if<TwccFeedback>(&datagram.content)) {
    controller_->OnTransportFeedback(adapter_.OnFeedback(*fb), now);
    ApplyDecision();
  } else if (const auto* nack = std::get_if<NackRequest>(&datagram.content)) {
    if (!scenario_.rtx.nack_enabled) return;
    for (RtpPacket& packet :
         rtx_buffer_.HandleNack(nack->seqs, now, last_rtt_.value_or(Millis(100)), target_bps_)) {
      pacer_.Enqueue(std::move(packet), now);
    }
    SchedulePacer();
  } else if (std::holds_alternative<KeyframeRequest>(datagram.content)) {
    if (last_keyframe_time_ && now - *last_keyframe_time_ < kMinKeyframeRequestIntervalUs) {
      ++keyframe_requests_ignored_;
    } else {
      encoder_.RequestKeyframe();
    }
  }
}

void Session::SampleCapacity(SimTime now) {
  const Link& link = *forward_[0];
  const double capacity = link.Available(now) ? static_cast<double>(link.CurrentCapacityBps(now)) : 0.0;
  capacity_sum_ += capacity;
  ++capacity_samples_;
  if (link.Available(now) && !link.Paused(now) && !link.InCongestionEpisode()) {
    capacity_clear_sum_ += capacity;
    ++capacity_clear_samples_;
  }
}

void Session::OnMetricsTick() {
  const SimTime now = loop_.now();
  ApplyDecision();
  SampleCapacity(now);
  metrics_.Tick(now, last_rtt_ ? static_cast<double>(*last_rtt_) / 1000.0 : 0.0, target_bps_);
  last_tick_ = now;
  const SimTime next = now + metrics_.window_us();
  if (next <= scenario_.duration_us) {
    loop_.Schedule(next, EventKind::kMetricsTick, [this] { OnMetricsTick(); });
  }
}

std::optional<double> Session::capacity_between_episodes_bps() const {
  if (capacity_clear_samples_ == 0) return std::nullopt;
  return capacity_clear_sum_ / static_cast<double>(capacity_clear_samples_);
}

std::optional<double> Session::mean_capacity_bps() const {
  if (capacity_samples_ == 0) return std::nullopt;
  return capacity_sum_ / static_cast<double>(capacity_samples_);
}

}  // namespace rtcnetlab
