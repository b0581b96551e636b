#include "rtcnetlab/bridge/protocol.h"

namespace rtcnetlab {

using nlohmann::json;

BridgeProtocol::BridgeProtocol(EpisodeConfig defaults) : defaults_(std::move(defaults)) {}

std::string BridgeProtocol::Hello() const {
  return json{{"type", "hello"},
              {"v", kBridgeProtocolVersion},
              {"server", "rtcnetlab"},
              {"min_bitrate_bps", kMinBitrateBps},
              {"max_bitrate_bps", kMaxBitrateBps},
              {"dead_band", kDeadBand}}
      .dump();
}

std::string BridgeProtocol::Error(const std::string& message) {
  return json{{"type", "error"}, {"message", message}}.dump();
}

std::vector<std::string> BridgeProtocol::HandleLine(const std::string& line) {
  json message;
  try {
    message = json::parse(line);
  } catch (const json::exception&) {
    return {Error("malformed message: not JSON")};
  }
  if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
    return {Error("malformed message: missing \"type\"")};
  }
  const std::string type = message["type"].get<std::string>();
  if (type == "reset") return HandleReset(message);
  if (type == "act") return HandleAct(message);
  return {Error("unknown message type \"" + type + "\"")};
}

std::vector<std::string> BridgeProtocol::HandleReset(const json& message) {
  json fields = defaults_.ToJson();
  for (const auto& [key, value] : message.items()) {
    if (key != "type") fields[key] = value;
  }
  try {
    auto episode = std::make_unique<Episode>(EpisodeConfig::FromJson(fields),
                                             next_episode_id_);
    ++next_episode_id_;
    episode_ = std::move(episode);
    return {episode_->Reset().ToJson().dump()};
  } catch (const ConfigError& e) {
    return {Error(e.what())};
  }
}

std::vector<std::string> BridgeProtocol::HandleAct(const json& message) {
  if (!awaiting_action()) return {Error("no episode running; send reset")};
  const auto id = [&](const char* key) -> std::optional<uint64_t> {
    if (!message.contains(key) || !message[key].is_number_unsigned()) return std::nullopt;
    return message[key].get<uint64_t>();
  };
  if (id("episode_id") != episode_->episode_id()) {
    return {Error("act does not answer the current episode")};
  }
  if (id("step_id") != episode_->next_step_id() - 1) {
    return {Error("act does not answer the pending observation")};
  }
  std::optional<double> action;
  if (message.contains("target_bitrate_bps") && message["target_bitrate_bps"].is_number()) {
    action = message["target_bitrate_bps"].get<double>();
  }
  return Advance(action, /*timed_out=*/false);
}

std::vector<std::string> BridgeProtocol::HandleTimeout() {
  if (!awaiting_action()) return {};
  return Advance(std::nullopt, /*timed_out=*/true);
}

std::vector<std::string> BridgeProtocol::Advance(std::optional<double> action,
                                                 bool timed_out) {
  std::optional<ControllerObservation> obs = episode_->Step(action, timed_out);
  if (obs) return {obs->ToJson().dump()};
  if (on_episode_end_) on_episode_end_(*episode_);
  json end = {{"type", "end"},
              {"episode_id", episode_->episode_id()},
              {"steps", episode_->total_steps()},
              {"summary", episode_->session().Summary()}};
  return {end.dump()};
}

}  // namespace rtcnetlab
