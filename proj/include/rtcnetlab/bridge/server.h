#ifndef RTCNETLAB_BRIDGE_SERVER_H_
#define RTCNETLAB_BRIDGE_SERVER_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>

#include "rtcnetlab/bridge/protocol.h"

namespace rtcnetlab {

// "host:port"; throws ConfigError when malformed.
std::pair<std::string, uint16_t> ParseListenAddress(const std::string& address);

struct BridgeServerOptions {
  std::string host = "127.0.0.1";
  // 0 picks an ephemeral port.
  uint16_t port = 0;
  std::chrono::milliseconds action_timeout{30000};
};

// Blocking TCP server for the bridge protocol, one client at a time.
class BridgeServer {
 public:
  BridgeServer(BridgeServerOptions options, EpisodeConfig defaults);
  ~BridgeServer();
  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  // Binds and listens; returns the bound port. Throws SimulationError.
  uint16_t Listen();
  // Accepts one client and serves it until it disconnects.
  void ServeOne(BridgeProtocol::EpisodeEndFn on_episode_end = {});

 private:
  BridgeServerOptions options_;
  EpisodeConfig defaults_;
  int listen_fd_ = -1;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_BRIDGE_SERVER_H_
