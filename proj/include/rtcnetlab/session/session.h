#ifndef RTCNETLAB_SESSION_SESSION_H_
#define RTCNETLAB_SESSION_SESSION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "rtcnetlab/feedback/feedback_channel.h"
#include "rtcnetlab/feedback/rtcp.h"
#include "rtcnetlab/feedback/twcc.h"
#include "rtcnetlab/media/encoder.h"
#include "rtcnetlab/metrics/metrics.h"
#include "rtcnetlab/net/link.h"
#include "rtcnetlab/net/multihome.h"
#include "rtcnetlab/net/tcp_pipe.h"
#include "rtcnetlab/rate/rate_controller.h"
#include "rtcnetlab/receiver/fec_receiver.h"
#include "rtcnetlab/receiver/jitter_buffer.h"
#include "rtcnetlab/receiver/nack_module.h"
#include "rtcnetlab/reliability/fec.h"
#include "rtcnetlab/reliability/retransmission_buffer.h"
#include "rtcnetlab/rtp/pacer.h"
#include "rtcnetlab/rtp/packetizer.h"
#include "rtcnetlab/scenario/scenario.h"
#include "rtcnetlab/sim/event_loop.h"

namespace rtcnetlab {

// Builds the controller a scenario asks for.
std::unique_ptr<RateController> MakeController(const Scenario& scenario);

// Receiver tick driving NACK generation.
constexpr SimDuration kReceiverTickUs = Millis(5);
// A frame captured while the pacer backlog exceeds this is not encoded.
constexpr SimDuration kMaxPacerQueueDelayUs = Millis(100);
// Keyframe requests arriving this soon after the last keyframe are ignored.
constexpr SimDuration kMinKeyframeRequestIntervalUs = Millis(300);

// One sender/receiver pair over the scenario's network. Construction
// schedules everything; RunUntil() advances the clock.
class Session {
 public:
  // `controller` overrides the scenario's controller when non-null.
  explicit Session(Scenario scenario, std::unique_ptr<RateController> controller = nullptr);
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Processes every event up to `t` (clamped to the duration).
  void RunUntil(SimTime t);
  // Runs to the end and closes the final metrics window.
  void Run();
  bool finished() const { return finished_; }
  SimTime now() const { return loop_.now(); }

  // Re-evaluates the controller and applies its decision to the encoder and
  // pacer. Called after feedback and on every metrics tick.
  void ApplyDecision();

  const Scenario& scenario() const { return scenario_; }
  RateController& controller() { return *controller_; }
  const RateController& controller() const { return *controller_; }
  const MetricsCollector& metrics() const { return metrics_; }
  const EventLoop& loop() const { return loop_; }
  int64_t target_bps() const { return target_bps_; }
  std::optional<SimDuration> last_rtt() const { return last_rtt_; }
  const std::vector<SimDuration>& rtt_samples() const { return rtt_samples_; }
  double last_jitter_us() const { return last_jitter_us_; }
  const std::vector<std::unique_ptr<Link>>& forward_links() const { return forward_; }
  const Link& reverse_link() const { return *reverse_; }
  const TcpPipe* tcp_pipe() const { return tcp_.get(); }
  const MultiHomeSplitter* splitter() const { return splitter_.get(); }
  const JitterBuffer& jitter_buffer() const { return jitter_buffer_; }
  const NackModule& nack_module() const { return nack_; }
  const RetransmissionBuffer& rtx_buffer() const { return rtx_buffer_; }
  const FecReceiver& fec_receiver() const { return fec_receiver_; }
  const TransportFeedbackAdapter& feedback_adapter() const { return adapter_; }
  const FeedbackChannel& feedback_channel() const { return *feedback_; }
  const Encoder& encoder() const { return encoder_; }
  const Pacer& pacer() const { return pacer_; }
  uint64_t keyframe_requests_ignored() const { return keyframe_requests_ignored_; }
  uint64_t frames_dropped() const { return frames_dropped_; }
  // Arrivals whose transport sequence number is below one already received.
  uint64_t reordered_arrivals() const { return reordered_arrivals_; }
  // Target rate in force at each decision, with its time.
  const std::vector<std::pair<SimTime, int64_t>>& target_history() const {
    return target_history_;
  }
  // Mean capacity of the first forward link sampled once per metrics window
  // while no congestion episode, handover or outage was active.
  std::optional<double> capacity_between_episodes_bps() const;
  // Mean of the first forward link's capacity over all samples.
  std::optional<double> mean_capacity_bps() const;

  // Machine-readable end-of-run summary (summary.json).
  nlohmann::json Summary() const;

 private:
  void SendForward(Datagram datagram, SimTime now);
  void OnForwardDelivery(Datagram datagram, SimTime arrival);
  void OnFeedbackDelivery(Datagram datagram, SimTime arrival);

  void OnFrameCapture();
  void OnFrameEncoded(const MediaFrame& frame);
  void SchedulePacer();
  void OnPacerRelease();
  void SendSenderReport();

  void OnRtp(const RtpPacket& packet, SimTime arrival, SimDuration transmission);
  void HandleMedia(const RtpPacket& packet, SimTime arrival, SimDuration transmission,
                   bool recovered);
  void OnReceiverTick();
  void SendTwcc();
  void SendReceiverReport();
  void SchedulePlayout();
  void OnPlayout();

  void OnMetricsTick();
  void SampleCapacity(SimTime now);

  Scenario scenario_;
  EventLoop loop_;
  std::unique_ptr<RateController> controller_;
  MetricsCollector metrics_;
  bool finished_ = false;

  // Sender.
  Encoder encoder_;
  Packetizer packetizer_;
  FecEncoder fec_encoder_;
  Pacer pacer_;
  RetransmissionBuffer rtx_buffer_;
  RtcpSender rtcp_sender_;
  TransportFeedbackAdapter adapter_;
  int64_t next_transport_seq_ = 0;
  uint64_t frames_dropped_ = 0;
  std::optional<SimTime> last_keyframe_time_;
  uint64_t keyframe_requests_ignored_ = 0;
  std::optional<EventHandle> pacer_event_;
  int64_t target_bps_ = 0;
  std::optional<SimDuration> last_rtt_;
  std::vector<SimDuration> rtt_samples_;
  double last_jitter_us_ = 0;
  std::vector<std::pair<SimTime, int64_t>> target_history_;

  // Network.
  std::vector<std::unique_ptr<Link>> forward_;
  std::unique_ptr<Link> reverse_;
  std::unique_ptr<TcpPipe> tcp_;
  std::unique_ptr<MultiHomeSplitter> splitter_;
  std::unique_ptr<FeedbackChannel> feedback_;
  SimDuration rtt_floor_us_ = 1;

  // Receiver.
  NackModule nack_;
  FecReceiver fec_receiver_;
  JitterBuffer jitter_buffer_;
  TwccRecorder twcc_;
  ReceiveStatistics receive_stats_;
  std::optional<EventHandle> playout_event_;
  std::optional<uint16_t> reported_keyframe_seq_;
  int64_t highest_transport_seq_ = -1;
  uint64_t reordered_arrivals_ = 0;
  SimTime playout_event_time_ = 0;

  // Capacity sampling for the summary.
  double capacity_clear_sum_ = 0;
  int64_t capacity_clear_samples_ = 0;
  double capacity_sum_ = 0;
  int64_t capacity_samples_ = 0;
  SimTime last_tick_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_SESSION_SESSION_H_
