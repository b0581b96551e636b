#ifndef RTCNETLAB_SCENARIO_SCENARIO_H_
#define RTCNETLAB_SCENARIO_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtcnetlab/feedback/feedback_channel.h"
#include "rtcnetlab/media/encoder.h"
#include "rtcnetlab/net/link_profile.h"
#include "rtcnetlab/rate/gcc_controller.h"
#include "rtcnetlab/rate/simple_controllers.h"
#include "rtcnetlab/receiver/jitter_buffer.h"
#include "rtcnetlab/receiver/nack_module.h"
#include "rtcnetlab/reliability/fec.h"
#include "rtcnetlab/reliability/retransmission_buffer.h"
#include "rtcnetlab/rtp/packetizer.h"

namespace rtcnetlab {

enum class TransportMode { kUdp, kTcp };

std::string TransportModeName(TransportMode mode);
TransportMode ParseTransportMode(const std::string& name);

enum class ControllerKind { kGcc, kFixed, kScripted, kBridge };

std::string ControllerKindName(ControllerKind kind);
ControllerKind ParseControllerKind(const std::string& name);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::kGcc;
  int64_t start_rate_bps = 1'000'000;
  // kFixed only.
  int64_t fixed_rate_bps = 1'000'000;
  // kScripted only: (time, rate) steps.
  ScriptedController::Table script;
  // Start rate and bounds are taken from the fields above.
  GccConfig gcc;
};

struct ReceiverConfig {
  JitterBufferConfig jitter;
  NackConfig nack;
};

struct Scenario {
  std::string name = "custom";
  std::string description;
  SimDuration duration_us = Seconds(60);
  uint64_t seed = 1;
  TransportMode transport = TransportMode::kUdp;
  EncoderConfig encoder;
  RtpConfig rtp;
  RetransmissionConfig rtx;
  FecConfig fec;
  ReceiverConfig receiver;
  FeedbackConfig feedback;
  ControllerConfig controller;
  // Sender-to-receiver path; two links enable multi-homing.
  std::vector<LinkProfile> links;
  // Receiver-to-sender path. Defaults to a clean link with the first forward
  // link's delay and three times its capacity.
  std::optional<LinkProfile> reverse_link;
  // Share of packets on links[0] when multi-homed.
  double multihome_ratio = 0.5;
  // TCP receiver delay before acknowledging a segment.
  SimDuration tcp_ack_delay_us = 0;

  void Validate() const;
  LinkProfile ResolvedReverseLink() const;
};

// Strict parsing: unknown keys and type mismatches throw ConfigError naming
// the offending key path.
Scenario ScenarioFromJson(const nlohmann::json& json);
nlohmann::json ScenarioToJson(const Scenario& scenario);

// A preset name or a path to a JSON scenario file.
Scenario LoadScenario(const std::string& name_or_path);

// Machine-readable description of the scenario file format.
nlohmann::json ScenarioSchema();

}  // namespace rtcnetlab

#endif  // RTCNETLAB_SCENARIO_SCENARIO_H_
