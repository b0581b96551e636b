#include "rtcnetlab/metrics/summary.h"

#include <algorithm>
#include <cmath>

#include "rtcnetlab/rate/gcc_controller.h"
#include "rtcnetlab/session/session.h"

namespace rtcnetlab {

using nlohmann::json;

std::string PlrBand(double plr) {
  if (plr < kAcceptablePlrLow) return "below";
  if (plr > kAcceptablePlrHigh) return "above";
  return "within";
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size()));
  const size_t index = static_cast<size_t>(std::max(rank, 1.0)) - 1;
  return values[std::min(index, values.size() - 1)];
}

const std::vector<std::string>& ComparedFields() {
  static const auto* fields = new std::vector<std::string>{
      "/media/rx_total_mbytes",
      "/media/rx_rate_mbps_mean",
      "/media/goodput_mbps_mean",
      "/loss/network_plr",
      "/loss/playout_plr",
      "/loss/frames_skipped",
      "/rtt/mean_ms",
      "/rate/target_mean_mbps",
      "/rate/target_p95_mbps",
      "/media/rtx_sent",
      "/media/fec_sent",
      "/stall_ms",
      "/latency_mean_ms/total",
  };
  return *fields;
}

json CompareSummaries(const json& a, const json& b) {
  json out;
  out["a"] = a.value("scenario", "");
  out["b"] = b.value("scenario", "");
  out["fields"] = json::object();
  for (const std::string& field : ComparedFields()) {
    const json::json_pointer ptr(field);
    if (!a.contains(ptr) || !b.contains(ptr)) continue;
    const double va = a.at(ptr).get<double>();
    const double vb = b.at(ptr).get<double>();
    json entry = {{"a", va}, {"b", vb}, {"delta", vb - va}};
    entry["ratio"] = va != 0.0 ? json(vb / va) : json(nullptr);
    out["fields"][field] = entry;
  }
  return out;
}

namespace {

json LinkJson(const Link& link) {
  const LinkCounters& c = link.counters();
  const uint64_t in_flight = link.InTransit();
  return {
      {"name", link.profile().name},
      {"sent", c.sent},
      {"delivered", c.delivered},
      {"dropped_queue", c.dropped_queue},
      {"dropped_random", c.dropped_random},
      {"dropped_range", c.dropped_range},
      {"in_flight", in_flight},
      {"conserved", c.sent == c.delivered + c.dropped_queue + c.dropped_random +
                                 c.dropped_range + in_flight},
  };
}

double Ms(SimDuration us) { return static_cast<double>(us) / 1000.0; }

}  // namespace

json Session::Summary() const {
  const MetricsCollector& m = metrics_;
  const double seconds = static_cast<double>(loop_.now()) / 1e6;
  json s;
  s["version"] = kSummaryVersion;
  s["scenario"] = scenario_.name;
  s["seed"] = scenario_.seed;
  s["duration_s"] = seconds;
  s["controller"] = std::string(controller_->name());
  s["transport"] = TransportModeName(scenario_.transport);
  s["events_processed"] = loop_.events_processed();

  json links = json::array();
  json total = {{"sent", 0}, {"delivered", 0}, {"dropped_queue", 0}, {"dropped_random", 0},
                {"dropped_range", 0}, {"in_flight", 0}};
  bool conserved = true;
  for (const auto& link : forward_) {
    json l = LinkJson(*link);
    for (auto& [key, value] : total.items()) value = value.get<uint64_t>() + l[key].get<uint64_t>();
    conserved = conserved && l["conserved"].get<bool>();
    links.push_back(std::move(l));
  }
  total["conserved"] = conserved;
  s["links"] = links;
  s["reverse_link"] = LinkJson(*reverse_);
  s["conservation"] = total;

  s["media"] = {
      {"frames_encoded", encoder_.frames_emitted()},
      {"keyframes", encoder_.keyframes_emitted()},
      {"keyframe_requests_ignored", keyframe_requests_ignored_},
      {"frames_dropped", frames_dropped_},
      {"media_sent", m.media_sent()},
      {"rtx_sent", m.rtx_sent()},
      {"fec_sent", m.fec_sent()},
      {"rtx_rate", m.media_sent() > 0 ? double(m.rtx_sent()) / double(m.media_sent()) : 0.0},
      {"rx_total_mbytes", static_cast<double>(m.rx_total_bytes()) / 1e6},
      {"rx_rate_mbps_mean", seconds > 0 ? m.rx_total_bytes() * 8.0 / seconds / 1e6 : 0.0},
      {"goodput_mbps_mean",
       seconds > 0 ? m.goodput_total_bytes() * 8.0 / seconds / 1e6 : 0.0},
  };

  const double network_plr =
      m.net_sent() > 0 ? double(m.net_dropped()) / double(m.net_sent()) : 0.0;
  const double playout_plr =
      m.playout_packets() > 0 ? double(m.playout_missing()) / double(m.playout_packets()) : 0.0;
  s["loss"] = {
      {"network_sent", m.net_sent()},
      {"network_dropped", m.net_dropped()},
      {"network_plr", network_plr},
      {"acceptable_band", {kAcceptablePlrLow, kAcceptablePlrHigh}},
      {"playout_packets", m.playout_packets()},
      {"playout_missing", m.playout_missing()},
      {"playout_plr", playout_plr},
      {"playout_plr_band", PlrBand(playout_plr)},
      {"frames_played", m.frames_played()},
      {"frames_skipped", m.frames_skipped()},
      {"frames_undecodable", m.frames_undecodable()},
      {"late_packets", m.late_packets()},
  };

  double rtt_sum = 0;
  for (SimDuration r : rtt_samples_) rtt_sum += Ms(r);
  s["rtt"] = {
      {"samples", rtt_samples_.size()},
      {"mean_ms", rtt_samples_.empty() ? 0.0 : rtt_sum / double(rtt_samples_.size())},
      {"last_ms", last_rtt_ ? Ms(*last_rtt_) : 0.0},
  };

  // Time-weighted mean of the applied target.
  double weighted = 0;
  for (size_t i = 0; i < target_history_.size(); ++i) {
    const SimTime from = target_history_[i].first;
    const SimTime to = i + 1 < target_history_.size() ? target_history_[i + 1].first : loop_.now();
    weighted += static_cast<double>(target_history_[i].second) * static_cast<double>(to - from);
  }
  std::vector<double> targets;
  for (const MetricsRow& row : m.Rows()) targets.push_back(row.target_bitrate_mbps);
  json rate = {
      {"target_mean_mbps", loop_.now() > 0 ? weighted / static_cast<double>(loop_.now()) / 1e6 : 0.0},
      {"target_p95_mbps", Quantile(targets, 0.95)},
      {"target_changes", target_history_.size()},
      {"capacity_between_episodes_mbps",
       capacity_between_episodes_bps() ? json(*capacity_between_episodes_bps() / 1e6)
                                       : json(nullptr)},
      {"mean_capacity_mbps",
       mean_capacity_bps() ? json(*mean_capacity_bps() / 1e6) : json(nullptr)},
  };
  if (const auto* gcc = dynamic_cast<const GccController*>(controller_.get())) {
    json times = json::array();
    for (SimTime t : gcc->decrease_times()) times.push_back(static_cast<double>(t) / 1e6);
    rate["decrease_times_s"] = times;
    rate["final_threshold_ms"] = gcc->detector().threshold();
  }
  s["rate"] = rate;

  s["stall_ms"] = Ms(m.stall_total_us());
  LatencyBreakdown sum;
  for (const LatencyBreakdown& l : m.played_latencies()) {
    sum.processing += l.processing;
    sum.queuing += l.queuing;
    sum.transmission += l.transmission;
    sum.decoding += l.decoding;
  }
  const double n = std::max<double>(1.0, static_cast<double>(m.played_latencies().size()));
  s["latency_mean_ms"] = {
      {"processing", Ms(sum.processing) / n},
      {"queuing", Ms(sum.queuing) / n},
      {"transmission", Ms(sum.transmission) / n},
      {"decoding", Ms(sum.decoding) / n},
      {"total", Ms(sum.total()) / n},
  };

  const NackGateStats& gates = nack_.stats();
  const NackResponseStats& responses = rtx_buffer_.stats();
  s["nack"] = {
      {"requests_sent", gates.requests_sent},
      {"max_requests_for_one_seq", gates.max_requests_for_one_seq},
      {"max_list_size", gates.max_list_size},
      {"requested", responses.requested},
      {"retransmitted", responses.retransmitted},
      {"skipped_not_buffered", responses.skipped_not_buffered},
      {"skipped_within_rtt", responses.skipped_within_rtt},
      {"skipped_max_count", responses.skipped_max_count},
      {"skipped_bandwidth", responses.skipped_bandwidth},
  };
  s["fec"] = {{"recovered", fec_receiver_.recovered()}};
  s["receiver"] = {
      {"reordered_arrivals", reordered_arrivals_},
      {"release_order_violations", jitter_buffer_.release_order_violations()},
  };
  s["feedback"] = {
      {"messages", feedback_->sent()},
      {"bytes", feedback_->sent_bytes()},
      {"twcc_unknown_packets", adapter_.unknown_packets()},
      {"twcc_lost_feedback", adapter_.lost_feedback()},
  };
  if (tcp_) {
    const TcpCounters& c = tcp_->counters();
    s["tcp"] = {{"segments", c.segments},
                {"transmissions", c.transmissions},
                {"retransmissions", c.retransmissions},
                {"duplicates", c.duplicates},
                {"delivered", c.delivered}};
  }
  s["config"] = ScenarioToJson(scenario_);
  return s;
}

}  // namespace rtcnetlab
