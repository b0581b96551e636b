#include "rtcnetlab/metrics/metrics.h"

#include <algorithm>
#include <cstdio>

namespace rtcnetlab {

const char* const kMetricsCsvColumns[16] = {
    "t_s",
    "rx_rate_mbps",
    "rx_total_mbytes",
    "rtt_ms",
    "plr_window_pct",
    "plr_global_pct",
    "rtx_rate_global_pct",
    "goodput_mbps",
    "target_bitrate_mbps",
    "frames_played",
    "frames_skipped",
    "stall_ms",
    "latency_processing_ms",
    "latency_queuing_ms",
    "latency_transmission_ms",
    "latency_decoding_ms",
};

namespace {

double Pct(int64_t num, int64_t den) {
  return den > 0 ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double MeanMs(SimDuration sum_us, int64_t count) {
  return count > 0 ? static_cast<double>(sum_us) / 1000.0 / static_cast<double>(count) : 0.0;
}

}  // namespace

MetricsCollector::MetricsCollector(SimDuration window_us) : window_us_(window_us) {
  if (window_us_ <= 0) throw ConfigError("metrics window must be positive");
}

MetricsBucket& MetricsCollector::Bucket(SimTime t) {
  const size_t index = static_cast<size_t>(std::max<SimTime>(t, 0) / window_us_);
  if (index >= buckets_.size()) buckets_.resize(index + 1);
  return buckets_[index];
}

void MetricsCollector::OnRtpSent(const RtpPacket& packet, SimTime now) {
  MetricsBucket& b = Bucket(now);
  if (packet.is_fec) {
    ++b.fec_sent;
    ++fec_sent_;
  } else if (packet.is_retransmission) {
    ++b.rtx_sent;
    ++rtx_sent_;
  } else {
    ++b.media_sent;
    ++media_sent_;
  }
}

void MetricsCollector::OnNetSent(SimTime now) {
  ++Bucket(now).net_sent;
  ++net_sent_;
}

void MetricsCollector::OnNetDropped(SimTime sent_time) {
  ++Bucket(sent_time).net_dropped;
  ++net_dropped_;
}

void MetricsCollector::OnRtpDelivered(const RtpPacket& packet, SimTime arrival) {
  Bucket(arrival).rx_bytes += packet.size_bytes();
  rx_total_bytes_ += packet.size_bytes();
}

void MetricsCollector::OnPlayout(const PlayoutEvent& event) {
  MetricsBucket& b = Bucket(event.decided_at);
  b.playout_packets += event.packet_count;
  b.playout_missing += event.missing_packets;
  b.stall_us += event.stall_us;
  playout_packets_ += event.packet_count;
  playout_missing_ += event.missing_packets;
  stall_total_us_ += event.stall_us;
  if (event.kind == PlayoutEvent::Kind::kSkipped) {
    ++b.frames_skipped;
    ++frames_skipped_;
    if (event.undecodable) ++frames_undecodable_;
    return;
  }
  ++b.frames_played;
  ++frames_played_;
  b.latency_sum.processing += event.latency.processing;
  b.latency_sum.queuing += event.latency.queuing;
  b.latency_sum.transmission += event.latency.transmission;
  b.latency_sum.decoding += event.latency.decoding;
  latencies_.push_back(event.latency);
  for (const PacketArrival& p : event.packets) {
    Bucket(p.arrival).goodput_bytes += p.payload_bytes;
    goodput_total_bytes_ += p.payload_bytes;
  }
}

void MetricsCollector::Tick(SimTime now, double rtt_ms, int64_t target_bps) {
  Snapshot s;
  s.t = now;
  s.rtt_ms = rtt_ms;
  s.target_bps = target_bps;
  s.rx_total_bytes = rx_total_bytes_;
  s.net_sent = net_sent_;
  s.net_dropped = net_dropped_;
  s.media_sent = media_sent_;
  s.rtx_sent = rtx_sent_;
  s.frames_played = frames_played_;
  s.frames_skipped = frames_skipped_;
  s.stall_us = stall_total_us_;
  snapshots_.push_back(s);
}

WindowStats MetricsCollector::Window(SimTime from, SimTime to) const {
  WindowStats w;
  w.seconds = static_cast<double>(std::max<SimTime>(to - from, 0)) / 1e6;
  const size_t first = static_cast<size_t>(std::max<SimTime>(from, 0) / window_us_);
  const size_t last = static_cast<size_t>(std::max<SimTime>(to, 0) / window_us_);
  for (size_t i = first; i < last && i < buckets_.size(); ++i) {
    const MetricsBucket& b = buckets_[i];
    w.rx_bytes += b.rx_bytes;
    w.goodput_bytes += b.goodput_bytes;
    w.media_sent += b.media_sent;
    w.rtx_sent += b.rtx_sent;
    w.net_sent += b.net_sent;
    w.net_dropped += b.net_dropped;
  }
  return w;
}

std::vector<MetricsRow> MetricsCollector::Rows() const {
  std::vector<MetricsRow> rows;
  SimTime prev_t = 0;
  for (const Snapshot& s : snapshots_) {
    // Windows are aligned to the bucket grid; a final partial window covers
    // the buckets up to its end.
    const SimTime end = ((s.t + window_us_ - 1) / window_us_) * window_us_;
    WindowStats w = Window(prev_t, end);
    w.seconds = static_cast<double>(s.t - prev_t) / 1e6;
    MetricsBucket sum;
    for (size_t i = static_cast<size_t>(prev_t / window_us_);
         i < static_cast<size_t>(end / window_us_) && i < buckets_.size(); ++i) {
      sum.latency_sum.processing += buckets_[i].latency_sum.processing;
      sum.latency_sum.queuing += buckets_[i].latency_sum.queuing;
      sum.latency_sum.transmission += buckets_[i].latency_sum.transmission;
      sum.latency_sum.decoding += buckets_[i].latency_sum.decoding;
      sum.frames_played += buckets_[i].frames_played;
    }
    MetricsRow r;
    r.t_s = static_cast<double>(s.t) / 1e6;
    r.rx_rate_mbps = w.rx_rate_bps() / 1e6;
    r.rx_total_mbytes = static_cast<double>(s.rx_total_bytes) / 1e6;
    r.rtt_ms = s.rtt_ms;
    r.plr_window_pct = 100.0 * w.plr();
    r.plr_global_pct = Pct(s.net_dropped, s.net_sent);
    r.rtx_rate_global_pct = Pct(s.rtx_sent, s.media_sent);
    r.goodput_mbps = w.goodput_bps() / 1e6;
    r.target_bitrate_mbps = static_cast<double>(s.target_bps) / 1e6;
    r.frames_played = s.frames_played;
    r.frames_skipped = s.frames_skipped;
    r.stall_ms = static_cast<double>(s.stall_us) / 1000.0;
    r.latency_processing_ms = MeanMs(sum.latency_sum.processing, sum.frames_played);
    r.latency_queuing_ms = MeanMs(sum.latency_sum.queuing, sum.frames_played);
    r.latency_transmission_ms = MeanMs(sum.latency_sum.transmission, sum.frames_played);
    r.latency_decoding_ms = MeanMs(sum.latency_sum.decoding, sum.frames_played);
    rows.push_back(r);
    prev_t = end;
  }
  return rows;
}

void MetricsCollector::WriteCsv(std::ostream& out) const {
  for (int i = 0; i < 16; ++i) out << (i ? "," : "") << kMetricsCsvColumns[i];
  out << "\n";
  char line[512];
  for (const MetricsRow& r : Rows()) {
    std::snprintf(line, sizeof(line),
                  "%.3f,%.6f,%.6f,%.3f,%.4f,%.4f,%.4f,%.6f,%.6f,%llu,%llu,%.3f,%.3f,%.3f,%.3f,"
                  "%.3f\n",
                  r.t_s, r.rx_rate_mbps, r.rx_total_mbytes, r.rtt_ms, r.plr_window_pct,
                  r.plr_global_pct, r.rtx_rate_global_pct, r.goodput_mbps,
                  r.target_bitrate_mbps, static_cast<unsigned long long>(r.frames_played),
                  static_cast<unsigned long long>(r.frames_skipped), r.stall_ms,
                  r.latency_processing_ms, r.latency_queuing_ms, r.latency_transmission_ms,
                  r.latency_decoding_ms);
    out << line;
  }
}

}  // namespace rtcnetlab
