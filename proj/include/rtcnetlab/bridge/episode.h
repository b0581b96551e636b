#ifndef RTCNETLAB_BRIDGE_EPISODE_H_
#define RTCNETLAB_BRIDGE_EPISODE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtcnetlab/rate/simple_controllers.h"
#include "rtcnetlab/scenario/scenario.h"
#include "rtcnetlab/session/session.h"

namespace rtcnetlab {

// A new target within this relative distance of the current one is ignored.
constexpr double kDeadBand = 0.10;

struct EpisodeConfig {
  std::string scenario = "easy";
  uint64_t seed = 1;
  // Defaults to the scenario's duration.
  std::optional<double> duration_s;
  double decision_interval_s = 1.0;

  // Strict: unknown keys throw ConfigError.
  static EpisodeConfig FromJson(const nlohmann::json& json);
  nlohmann::json ToJson() const;
};

struct ControllerObservation {
  uint64_t episode_id = 0;
  uint64_t step_id = 0;
  double rtt_ms = 0;
  double plr_window = 0;
  double plr_global = 0;
  double jitter_ms = 0;
  // Share of RTP packets sent in the interval that were retransmissions.
  double retransmission_rate = 0;
  double goodput_bps = 0;
  double rx_rate_bps = 0;
  double current_target_bps = 0;
  double sim_time_s = 0;
  // Set when the action answering the previous observation was clamped,
  // malformed or missing (timeout).
  bool warn_clamped = false;
  bool warn_malformed = false;
  bool warn_timeout = false;

  nlohmann::json ToJson() const;
};

// How an action was interpreted.
struct ActionOutcome {
  int64_t requested_bps = 0;
  int64_t applied_bps = 0;
  bool changed = false;
  bool clamped = false;
  bool malformed = false;
  bool timed_out = false;
};

// Dead-band rule: returns `current` unless the clamped request differs from
// it by more than kDeadBand relative.
int64_t ApplyDeadBand(int64_t current_bps, int64_t requested_bps);

// One lock-step episode. The engine only advances inside Reset() and Step().
class Episode {
 public:
  // `scenario` is resolved from config.scenario (preset name or file path).
  Episode(const EpisodeConfig& config, uint64_t episode_id);

  // Runs the first interval under the start rate.
  ControllerObservation Reset();
  // Applies the action (nullopt: malformed; timed_out: no answer in time),
  // then advances one interval. Returns nullopt once the episode is over.
  std::optional<ControllerObservation> Step(std::optional<double> action_bps,
                                            bool timed_out = false);

  bool done() const { return done_; }
  uint64_t episode_id() const { return episode_id_; }
  uint64_t next_step_id() const { return step_id_; }
  int64_t total_steps() const { return total_steps_; }
  const EpisodeConfig& config() const { return config_; }
  Session& session() { return *session_; }
  const Session& session() const { return *session_; }
  const std::vector<ActionOutcome>& actions() const { return actions_; }
  // Applied target after each accepted change, in order.
  const std::vector<int64_t>& applied_targets() const { return applied_; }

 private:
  ControllerObservation Observe();

  EpisodeConfig config_;
  uint64_t episode_id_;
  SimDuration interval_us_;
  int64_t total_steps_ = 0;
  std::unique_ptr<Session> session_;
  ExternalController* controller_ = nullptr;
  uint64_t step_id_ = 0;
  bool done_ = false;
  bool reset_ = false;
  ActionOutcome pending_flags_;
  std::vector<ActionOutcome> actions_;
  std::vector<int64_t> applied_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_BRIDGE_EPISODE_H_
