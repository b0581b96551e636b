#include "rtcnetlab/feedback/rtcp.h"

#include <algorithm>
#include <cmath>

namespace rtcnetlab {

void RtcpSender::OnMediaSent(const RtpPacket& packet) {
  ++packets_;
  octets_ += static_cast<uint64_t>(packet.payload_size);
}

SenderReport RtcpSender::BuildSenderReport(SimTime now, uint32_t rtp_timestamp) const {
  SenderReport report;
  report.send_time = now;
  report.rtp_timestamp = rtp_timestamp;
  report.packet_count = packets_;
  report.octet_count = octets_;
  return report;
}

std::optional<SimDuration> ComputeRtt(const ReceiverReport& report, SimTime now,
                                      SimDuration floor_us) {
  if (!report.lsr) return std::nullopt;
  return std::max(floor_us, now - *report.lsr - report.dlsr);
}

void ReceiveStatistics::OnPacket(const RtpPacket& packet, SimTime arrival) {
  if (packet.is_retransmission || packet.is_fec) return;
  const int64_t seq = unwrapper_.Unwrap(packet.stream_seq);
  if (!base_seq_) base_seq_ = seq;
  highest_seq_ = std::max(highest_seq_, seq);
  ++received_;
  // Transit in RTP units; the arrival clock is converted exactly enough for
  // a running estimate.
  const int64_t arrival_rtp =
      static_cast<int64_t>(std::llround(static_cast<double>(arrival) * clock_hz_ / 1e6));
  const int64_t transit = arrival_rtp - static_cast<int64_t>(packet.rtp_timestamp);
  if (last_transit_) {
    const double d = std::abs(static_cast<double>(transit - *last_transit_));
    jitter_ += (d - jitter_) / 16.0;
  }
  last_transit_ = transit;
}

void ReceiveStatistics::OnSenderReport(const SenderReport& report, SimTime arrival) {
  last_sr_send_time_ = report.send_time;
  last_sr_arrival_ = arrival;
}

int64_t ReceiveStatistics::expected() const {
  if (!base_seq_) return 0;
  return highest_seq_ - *base_seq_ + 1;
}

double ReceiveStatistics::jitter_us() const { return jitter_ * 1e6 / clock_hz_; }

ReceiverReport ReceiveStatistics::BuildReport(SimTime now) {
  ReceiverReport report;
  report.send_time = now;
  const int64_t expected_total = expected();
  const int64_t expected_interval = expected_total - expected_prior_;
  const int64_t received_interval = received_ - received_prior_;
  const int64_t lost_interval = expected_interval - received_interval;
  expected_prior_ = expected_total;
  received_prior_ = received_;
  if (expected_interval > 0 && lost_interval > 0) {
    report.fraction_lost_q8 =
        static_cast<uint8_t>(std::min<int64_t>(255, (lost_interval << 8) / expected_interval));
  }
  // Late originals can shrink the computed total; the reported counter
  // never goes backwards.
  cumulative_lost_ = std::max(cumulative_lost_, expected_total - received_);
  report.cumulative_lost = cumulative_lost_;
  report.highest_seq = highest_seq_;
  report.interarrival_jitter_us = jitter_us();
  if (last_sr_send_time_) {
    report.lsr = last_sr_send_time_;
    report.dlsr = now - last_sr_arrival_;
  }
  return report;
}

}  // namespace rtcnetlab
