#include "rtcnetlab/bridge/server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace rtcnetlab {

namespace {

bool SendAll(int fd, const std::string& data) {
  size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<size_t>(n);
  }
  return true;
}

bool SendLines(int fd, const std::vector<std::string>& lines) {
  for (const std::string& line : lines) {
    if (!SendAll(fd, line + "\n")) return false;
  }
  return true;
}

}  // namespace

std::pair<std::string, uint16_t> ParseListenAddress(const std::string& address) {
  const size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw ConfigError("listen address must be host:port, got \"" + address + "\"");
  }
  const std::string host = address.substr(0, colon);
  const std::string port_text = address.substr(colon + 1);
  if (port_text.find_first_not_of("0123456789") != std::string::npos || port_text.size() > 5) {
    throw ConfigError("invalid port \"" + port_text + "\"");
  }
  const int port = std::stoi(port_text);
  if (port > 65535) throw ConfigError("invalid port \"" + port_text + "\"");
  return {host, static_cast<uint16_t>(port)};
}

BridgeServer::BridgeServer(BridgeServerOptions options, EpisodeConfig defaults)
    : options_(std::move(options)), defaults_(std::move(defaults)) {}

BridgeServer::~BridgeServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

uint16_t BridgeServer::Listen() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw SimulationError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(options_.port);
  const std::string host = options_.host == "localhost" ? "127.0.0.1" : options_.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw ConfigError("listen host must be an IPv4 address, got \"" + options_.host + "\"");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    throw SimulationError(std::string("bind: ") + std::strerror(errno));
  }
  if (::listen(listen_fd_, 1) < 0) {
    throw SimulationError(std::string("listen: ") + std::strerror(errno));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

void BridgeServer::ServeOne(BridgeProtocol::EpisodeEndFn on_episode_end) {
  if (listen_fd_ < 0) Listen();
  int fd;
  do {
    fd = ::accept(listen_fd_, nullptr, nullptr);
  } while (fd < 0 && errno == EINTR);
  if (fd < 0) throw SimulationError(std::string("accept: ") + std::strerror(errno));

  BridgeProtocol protocol(defaults_);
  protocol.set_on_episode_end(std::move(on_episode_end));
  std::string buffer;
  bool open = SendLines(fd, {protocol.Hello()});
  while (open) {
    // The engine is paused whenever an observation is outstanding; only then
    // does the action timeout apply.
    const int timeout_ms =
        protocol.awaiting_action() ? static_cast<int>(options_.action_timeout.count()) : -1;
    pollfd pfd{fd, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, timeout_ms);
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0) break;
    if (ready == 0) {
      open = SendLines(fd, protocol.HandleTimeout());
      continue;
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<size_t>(n));
    size_t newline;
    while (open && (newline = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      open = SendLines(fd, protocol.HandleLine(line));
    }
  }
  ::close(fd);
}

}  // namespace rtcnetlab
