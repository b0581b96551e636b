#ifndef RTCNETLAB_METRICS_METRICS_H_
#define RTCNETLAB_METRICS_METRICS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rtcnetlab/receiver/jitter_buffer.h"
#include "rtcnetlab/rtp/rtp_packet.h"

namespace rtcnetlab {

// Column order of metrics.csv; bump kMetricsCsvVersion on any change.
constexpr int kMetricsCsvVersion = 1;
extern const char* const kMetricsCsvColumns[16];

struct MetricsRow {
  double t_s = 0;
  double rx_rate_mbps = 0;
  double rx_total_mbytes = 0;
  double rtt_ms = 0;
  double plr_window_pct = 0;
  double plr_global_pct = 0;
  double rtx_rate_global_pct = 0;
  double goodput_mbps = 0;
  double target_bitrate_mbps = 0;
  uint64_t frames_played = 0;
  uint64_t frames_skipped = 0;
  double stall_ms = 0;
  double latency_processing_ms = 0;
  double latency_queuing_ms = 0;
  double latency_transmission_ms = 0;
  double latency_decoding_ms = 0;
};

// Per-window accumulators. Sends, drops and deliveries are filed under the
// window they happened in, except drops, which go to the window their
// datagram was sent in, and goodput, which goes to the window the payload
// arrived in once its frame is played.
struct MetricsBucket {
  int64_t rx_bytes = 0;
  int64_t media_sent = 0;
  int64_t rtx_sent = 0;
  int64_t fec_sent = 0;
  int64_t net_sent = 0;
  int64_t net_dropped = 0;
  int64_t goodput_bytes = 0;
  int64_t frames_played = 0;
  int64_t frames_skipped = 0;
  SimDuration stall_us = 0;
  LatencyBreakdown latency_sum;
  int64_t playout_packets = 0;
  int64_t playout_missing = 0;
};

// Aggregates over an arbitrary range of windows.
struct WindowStats {
  double seconds = 0;
  int64_t rx_bytes = 0;
  int64_t goodput_bytes = 0;
  int64_t media_sent = 0;
  int64_t rtx_sent = 0;
  int64_t net_sent = 0;
  int64_t net_dropped = 0;

  double rx_rate_bps() const { return seconds > 0 ? rx_bytes * 8.0 / seconds : 0.0; }
  double goodput_bps() const { return seconds > 0 ? goodput_bytes * 8.0 / seconds : 0.0; }
  double plr() const { return net_sent > 0 ? double(net_dropped) / double(net_sent) : 0.0; }
  double rtx_rate() const {
    return media_sent > 0 ? double(rtx_sent) / double(media_sent) : 0.0;
  }
};

class MetricsCollector {
 public:
  explicit MetricsCollector(SimDuration window_us = Seconds(1));

  // RTP packets leaving the pacer, classified as media, repair or parity.
  void OnRtpSent(const RtpPacket& packet, SimTime now);
  // Forward-path datagrams carrying RTP as seen by the links, including
  // transport-layer retransmissions.
  void OnNetSent(SimTime now);
  void OnNetDropped(SimTime sent_time);
  void OnRtpDelivered(const RtpPacket& packet, SimTime arrival);
  void OnPlayout(const PlayoutEvent& event);
  void OnLatePacket() { ++late_packets_; }

  // Closes the window ending at `now` (snapshot of cumulative columns).
  void Tick(SimTime now, double rtt_ms, int64_t target_bps);

  // Rows with window columns finalized from the buckets.
  std::vector<MetricsRow> Rows() const;
  void WriteCsv(std::ostream& out) const;
  WindowStats Window(SimTime from, SimTime to) const;

  SimDuration window_us() const { return window_us_; }
  int64_t rx_total_bytes() const { return rx_total_bytes_; }
  int64_t media_sent() const { return media_sent_; }
  int64_t rtx_sent() const { return rtx_sent_; }
  int64_t fec_sent() const { return fec_sent_; }
  int64_t net_sent() const { return net_sent_; }
  int64_t net_dropped() const { return net_dropped_; }
  uint64_t frames_played() const { return frames_played_; }
  uint64_t frames_skipped() const { return frames_skipped_; }
  uint64_t frames_undecodable() const { return frames_undecodable_; }
  int64_t playout_packets() const { return playout_packets_; }
  int64_t playout_missing() const { return playout_missing_; }
  int64_t goodput_total_bytes() const { return goodput_total_bytes_; }
  SimDuration stall_total_us() const { return stall_total_us_; }
  uint64_t late_packets() const { return late_packets_; }
  const std::vector<LatencyBreakdown>& played_latencies() const { return latencies_; }

 private:
  struct Snapshot {
    SimTime t = 0;
    double rtt_ms = 0;
    int64_t target_bps = 0;
    int64_t rx_total_bytes = 0;
    int64_t net_sent = 0;
    int64_t net_dropped = 0;
    int64_t media_sent = 0;
    int64_t rtx_sent = 0;
    uint64_t frames_played = 0;
    uint64_t frames_skipped = 0;
    SimDuration stall_us = 0;
  };

  MetricsBucket& Bucket(SimTime t);

  SimDuration window_us_;
  std::vector<MetricsBucket> buckets_;
  std::vector<Snapshot> snapshots_;
  int64_t rx_total_bytes_ = 0;
  int64_t media_sent_ = 0;
  int64_t rtx_sent_ = 0;
  int64_t fec_sent_ = 0;
  int64_t net_sent_ = 0;
  int64_t net_dropped_ = 0;
  uint64_t frames_played_ = 0;
  uint64_t frames_skipped_ = 0;
  uint64_t frames_undecodable_ = 0;
  int64_t playout_packets_ = 0;
  int64_t playout_missing_ = 0;
  int64_t goodput_total_bytes_ = 0;
  SimDuration stall_total_us_ = 0;
  uint64_t late_packets_ = 0;
  std::vector<LatencyBreakdown> latencies_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_METRICS_METRICS_H_
