#include "rtcnetlab/net/tcp_pipe.h"

#include <algorithm>

namespace rtcnetlab {

TcpPipe::TcpPipe(EventLoop& loop, Link& link, SimDuration ack_delay_us)
    : loop_(loop), link_(link), ack_delay_us_(ack_delay_us) {
  link_.set_on_deliver([this](Datagram d, SimTime arrival) {
    OnLinkDelivery(std::move(d), arrival);
  });
}

SimDuration TcpPipe::rto() const {
  if (!srtt_) return std::max(kMinRto, Seconds(1));
  return std::max(kMinRto, 2 * *srtt_);
}

void TcpPipe::Send(Datagram datagram, SimTime now) {
  const int64_t seq = next_seq_++;
  datagram.segment = seq;
  ++counters_.segments;
  unacked_.emplace(seq, Segment{std::move(datagram), now, false});
  TransmitSegment(seq);
}

void TcpPipe::TransmitSegment(int64_t seq) {
  auto it = unacked_.find(seq);
  if (it == unacked_.end()) return;
  const SimTime now = loop_.now();
  it->second.last_tx = now;
  ++counters_.transmissions;
  link_.Transmit(it->second.datagram, now);
  loop_.Schedule(now + rto(), EventKind::kTcpTimeout,
                 [this, seq, now] { OnTimeout(seq, now); });
}

void TcpPipe::OnTimeout(int64_t seq, SimTime tx_time) {
  auto it = unacked_.find(seq);
  if (it == unacked_.end() || it->second.last_tx != tx_time) return;
  it->second.retransmitted = true;
  ++counters_.retransmissions;
  TransmitSegment(seq);
}

void TcpPipe::OnLinkDelivery(Datagram datagram, SimTime arrival) {
  const int64_t seq = datagram.segment;
  const SimTime tx_time = datagram.sent_time;
  loop_.Schedule(arrival + ack_delay_us_, EventKind::kTcpTimeout,
                 [this, seq, tx_time] { OnAck(seq, tx_time); });
  if (seq < next_expected_ || reorder_.count(seq) > 0) {
    ++counters_.duplicates;
    return;
  }
  reorder_.emplace(seq, std::move(datagram));
  while (!reorder_.empty() && reorder_.begin()->first == next_expected_) {
    Datagram ready = std::move(reorder_.begin()->second);
    reorder_.erase(reorder_.begin());
    ++next_expected_;
    ++counters_.delivered;
    if (on_deliver_) on_deliver_(std::move(ready), arrival);
  }
}

void TcpPipe::OnAck(int64_t seq, SimTime tx_time) {
  auto it = unacked_.find(seq);
  if (it == unacked_.end()) return;
  if (!it->second.retransmitted) {
    const SimDuration sample = loop_.now() - tx_time;
    srtt_ = srtt_ ? (7 * *srtt_ + sample) / 8 : sample;
  }
  unacked_.erase(it);
}

}  // namespace rtcnetlab
