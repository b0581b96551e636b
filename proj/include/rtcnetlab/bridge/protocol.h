#ifndef RTCNETLAB_BRIDGE_PROTOCOL_H_
#define RTCNETLAB_BRIDGE_PROTOCOL_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rtcnetlab/bridge/episode.h"

namespace rtcnetlab {

constexpr int kBridgeProtocolVersion = 1;

// Transport-free message handling for the control bridge. Every message is
// one JSON object per line with a "type" field:
//   server: hello, obs, end, error
//   client: reset, act
// The server answers each reset with the first obs and each act with the
// next obs, or with end once the episode is over.
class BridgeProtocol {
 public:
  using EpisodeEndFn = std::function<void(const Episode&)>;

  // Fields absent from a reset message are taken from `defaults`.
  explicit BridgeProtocol(EpisodeConfig defaults);

  std::string Hello() const;
  // Returns the reply lines, without trailing newlines.
  std::vector<std::string> HandleLine(const std::string& line);
  // No act arrived within the action timeout: the current bitrate is kept
  // and the episode advances, flagged.
  std::vector<std::string> HandleTimeout();

  // An observation is outstanding and the engine is paused on it.
  bool awaiting_action() const { return episode_ && !episode_->done(); }
  const Episode* episode() const { return episode_.get(); }
  void set_on_episode_end(EpisodeEndFn fn) { on_episode_end_ = std::move(fn); }

  static std::string Error(const std::string& message);

 private:
  std::vector<std::string> HandleReset(const nlohmann::json& message);
  std::vector<std::string> HandleAct(const nlohmann::json& message);
  std::vector<std::string> Advance(std::optional<double> action, bool timed_out);

  EpisodeConfig defaults_;
  std::unique_ptr<Episode> episode_;
  uint64_t next_episode_id_ = 1;
  EpisodeEndFn on_episode_end_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_BRIDGE_PROTOCOL_H_
