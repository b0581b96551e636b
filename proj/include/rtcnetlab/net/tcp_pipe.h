#ifndef RTCNETLAB_NET_TCP_PIPE_H_
#define RTCNETLAB_NET_TCP_PIPE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "rtcnetlab/net/link.h"

namespace rtcnetlab {

struct TcpCounters {
  uint64_t segments = 0;
  uint64_t transmissions = 0;
  uint64_t retransmissions = 0;
  uint64_t duplicates = 0;
  uint64_t delivered = 0;
};

// Reliable in-order byte pipe over a lossy link, without congestion window
// dynamics. Every segment is retransmitted until acknowledged, with
// RTO = max(200 ms, 2 * smoothed RTT). The receiver releases segments only
// in order, so one loss blocks everything behind it until the retransmission
// lands; the blocked run is then released back-to-back.
class TcpPipe {
 public:
  using DeliverFn = std::function<void(Datagram, SimTime release_time)>;

  static constexpr SimDuration kMinRto = Millis(200);

  // `ack_delay_us` is the one-way delay of the acknowledgement path.
  TcpPipe(EventLoop& loop, Link& link, SimDuration ack_delay_us);
  TcpPipe(const TcpPipe&) = delete;
  TcpPipe& operator=(const TcpPipe&) = delete;

  void set_on_deliver(DeliverFn fn) { on_deliver_ = std::move(fn); }
  void Send(Datagram datagram, SimTime now);

  SimDuration rto() const;
  std::optional<SimDuration> smoothed_rtt() const { return srtt_; }
  const TcpCounters& counters() const { return counters_; }
  size_t unacked() const { return unacked_.size(); }
  size_t blocked() const { return reorder_.size(); }

 private:
  struct Segment {
    Datagram datagram;
    SimTime last_tx = 0;
    bool retransmitted = false;
  };

  void TransmitSegment(int64_t seq);
  void OnTimeout(int64_t seq, SimTime tx_time);
  void OnLinkDelivery(Datagram datagram, SimTime arrival);
  void OnAck(int64_t seq, SimTime tx_time);

  EventLoop& loop_;
  Link& link_;
  SimDuration ack_delay_us_;
  DeliverFn on_deliver_;
  int64_t next_seq_ = 0;
  std::map<int64_t, Segment> unacked_;
  std::optional<SimDuration> srtt_;
  int64_t next_expected_ = 0;
  std::map<int64_t, Datagram> reorder_;
  TcpCounters counters_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_NET_TCP_PIPE_H_
