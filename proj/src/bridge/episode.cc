#include "rtcnetlab/bridge/episode.h"

#include <cmath>
#include <set>

namespace rtcnetlab {

using nlohmann::json;

namespace {

SimDuration ToMicros(double seconds) { return std::llround(seconds * 1e6); }

}  // namespace

EpisodeConfig EpisodeConfig::FromJson(const json& j) {
  static const std::set<std::string> kKeys = {"scenario", "seed", "duration_s",
                                              "decision_interval_s"};
  if (!j.is_object()) throw ConfigError("episode config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown episode key \"" + key + "\"");
  }
  EpisodeConfig c;
  try {
    if (j.contains("scenario")) c.scenario = j.at("scenario").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    if (j.contains("duration_s") && !j.at("duration_s").is_null()) {
      c.duration_s = j.at("duration_s").get<double>();
    }
    if (j.contains("decision_interval_s")) {
      c.decision_interval_s = j.at("decision_interval_s").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("episode config: ") + e.what());
  }
  return c;
}

json EpisodeConfig::ToJson() const {
  json j = {{"scenario", scenario}, {"seed", seed}, {"decision_interval_s", decision_interval_s}};
  j["duration_s"] = duration_s ? json(*duration_s) : json(nullptr);
  return j;
}

json ControllerObservation::ToJson() const {
  json warnings = json::array();
  if (warn_clamped) warnings.push_back("clamped");
  if (warn_malformed) warnings.push_back("malformed");
  if (warn_timeout) warnings.push_back("timeout");
  return {
      {"type", "obs"},
      {"episode_id", episode_id},
      {"step_id", step_id},
      {"rtt_ms", rtt_ms},
      {"plr_window", plr_window},
      {"plr_global", plr_global},
      {"jitter_ms", jitter_ms},
      {"retransmission_rate", retransmission_rate},
      {"goodput_bps", goodput_bps},
      {"rx_rate_bps", rx_rate_bps},
      {"current_target_bps", current_target_bps},
      {"sim_time_s", sim_time_s},
      {"warnings", warnings},
  };
}

int64_t ApplyDeadBand(int64_t current_bps, int64_t requested_bps) {
  if (current_bps <= 0) return requested_bps;
  const double change = std::abs(static_cast<double>(requested_bps - current_bps)) /
                        static_cast<double>(current_bps);
  return change <= kDeadBand ? current_bps : requested_bps;
}

Episode::Episode(const EpisodeConfig& config, uint64_t episode_id)
    : config_(config), episode_id_(episode_id) {
  if (!(config_.decision_interval_s > 0) ||
      ToMicros(config_.decision_interval_s) % Seconds(1) != 0) {
    throw ConfigError("decision_interval_s must be a positive whole number of seconds");
  }
  interval_us_ = ToMicros(config_.decision_interval_s);
  Scenario scenario = LoadScenario(config_.scenario);
  scenario.seed = config_.seed;
  if (config_.duration_s) {
    if (!(*config_.duration_s > 0)) throw ConfigError("duration_s must be positive");
    scenario.duration_us = ToMicros(*config_.duration_s);
  }
  if (scenario.duration_us % interval_us_ != 0) {
    throw ConfigError("duration must be a multiple of decision_interval_s");
  }
  total_steps_ = scenario.duration_us / interval_us_;
  scenario.controller.kind = ControllerKind::kBridge;
  auto controller = std::make_unique<ExternalController>(scenario.controller.start_rate_bps);
  controller_ = controller.get();
  session_ = std::make_unique<Session>(std::move(scenario), std::move(controller));
}

ControllerObservation Episode::Reset() {
  if (reset_) throw SimulationError("episode already reset");
  reset_ = true;
  session_->RunUntil(interval_us_);
  ControllerObservation obs = Observe();
  ++step_id_;
  return obs;
}

std::optional<ControllerObservation> Episode::Step(std::optional<double> action_bps,
                                                   bool timed_out) {
  if (!reset_) throw SimulationError("step before reset");
  if (done_) return std::nullopt;

  const int64_t current = session_->target_bps();
  ActionOutcome outcome;
  outcome.timed_out = timed_out;
  outcome.applied_bps = current;
  if (timed_out) {
    outcome.requested_bps = current;
  } else if (!action_bps || !std::isfinite(*action_bps)) {
    outcome.malformed = true;
    outcome.requested_bps = current;
  } else {
    const int64_t clamped = ClampBitrate(*action_bps);
    outcome.clamped = *action_bps < static_cast<double>(kMinBitrateBps) ||
                      *action_bps > static_cast<double>(kMaxBitrateBps);
    outcome.requested_bps = clamped;
    outcome.applied_bps = ApplyDeadBand(current, clamped);
  }
  if (outcome.applied_bps != current) {
    controller_->SetTarget(outcome.applied_bps);
    session_->ApplyDecision();
    outcome.applied_bps = session_->target_bps();
    outcome.changed = outcome.applied_bps != current;
    if (outcome.changed) applied_.push_back(outcome.applied_bps);
  }
  actions_.push_back(outcome);
  pending_flags_ = outcome;

  if (static_cast<int64_t>(step_id_) >= total_steps_) {
    session_->Run();
    done_ = true;
    return std::nullopt;
  }
  session_->RunUntil(static_cast<SimTime>(step_id_ + 1) * interval_us_);
  ControllerObservation obs = Observe();
  ++step_id_;
  return obs;
}

ControllerObservation Episode::Observe() {
  const Session& s = *session_;
  const SimTime now = s.now();
  const WindowStats w = s.metrics().Window(now - interval_us_, now);
  ControllerObservation o;
  o.episode_id = episode_id_;
  o.step_id = step_id_;
  o.rtt_ms = s.last_rtt() ? static_cast<double>(*s.last_rtt()) / 1000.0 : 0.0;
  o.plr_window = w.plr();
  const MetricsCollector& m = s.metrics();
  o.plr_global = m.net_sent() > 0 ? double(m.net_dropped()) / double(m.net_sent()) : 0.0;
  o.jitter_ms = s.last_jitter_us() / 1000.0;
  const int64_t rtp_sent = w.media_sent + w.rtx_sent;
  o.retransmission_rate = rtp_sent > 0 ? double(w.rtx_sent) / double(rtp_sent) : 0.0;
  o.goodput_bps = w.goodput_bps();
  o.rx_rate_bps = w.rx_rate_bps();
  o.current_target_bps = static_cast<double>(s.target_bps());
  o.sim_time_s = static_cast<double>(now) / 1e6;
  o.warn_clamped = pending_flags_.clamped;
  o.warn_malformed = pending_flags_.malformed;
  o.warn_timeout = pending_flags_.timed_out;
  return o;
}

}  // namespace rtcnetlab
