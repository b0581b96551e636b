#include "rtcnetlab/scenario/presets.h"

#include <algorithm>
#include <functional>
#include <map>

namespace rtcnetlab {

using nlohmann::json;

namespace {

LinkProfile Cellular(const std::string& name, int64_t capacity_bps) {
  LinkProfile link;
  link.name = name;
  link.base_capacity_bps = capacity_bps;
  link.base_delay_us = Millis(15);
  link.queue_limit_bytes = 3'000'000;
  return link;
}

LinkProfile Wifi(int64_t capacity_bps) {
  LinkProfile link;
  link.name = "wifi";
  link.base_capacity_bps = capacity_bps;
  link.base_delay_us = Millis(5);
  link.queue_limit_bytes = 1'000'000;
  return link;
}

BackgroundLoadConfig Background(double share, SimDuration redraw_period) {
  BackgroundLoadConfig b;
  b.share = share;
  b.redraw_period_us = redraw_period;
  return b;
}

LinkEventProcess Episodes(LinkEventKind kind, int count, SimDuration window_end,
                          SimDuration min_duration, SimDuration max_duration) {
  LinkEventProcess p;
  p.kind = kind;
  p.count = count;
  p.window_start_us = Seconds(5);
  p.window_end_us = window_end;
  p.min_duration_us = min_duration;
  p.max_duration_us = max_duration;
  return p;
}

Scenario Base(const std::string& name, const std::string& description, int duration_s) {
  Scenario s;
  s.name = name;
  s.description = description;
  s.duration_us = Seconds(duration_s);
  return s;
}

void UseFixedRate(Scenario* s, int64_t bps) {
  s->controller.kind = ControllerKind::kFixed;
  s->controller.fixed_rate_bps = bps;
  s->controller.start_rate_bps = bps;
  s->encoder.target_bitrate_bps = bps;
}

void DisableNack(Scenario* s) {
  s->rtx.nack_enabled = false;
  s->receiver.nack.enabled = false;
}

Scenario Easy() {
  Scenario s = Base("easy",
                    "Stable 5G uplink able to carry the 10 Mbps encoder cap with its "
                    "packet overhead, and rare random loss.",
                    300);
  LinkProfile link = Cellular("5g_up", 11'000'000);
  link.random_loss = 0.0005;
  s.links = {link};
  return s;
}

Scenario Moderate() {
  Scenario s = Base("moderate",
                    "Loaded 5G cell: 10-20 background users redrawn every second, 1% random "
                    "loss and 6 congestion episodes of 2-20 s at 10-50% capacity.",
                    600);
  LinkProfile link = Cellular("5g_up", 20'000'000);
  link.random_loss = 0.01;
  link.background = Background(1.0, Seconds(1));
  LinkEventProcess episodes =
      Episodes(LinkEventKind::kCongestion, 6, Seconds(580), Seconds(2), Seconds(20));
  episodes.min_capacity_factor = 0.1;
  episodes.max_capacity_factor = 0.5;
  episodes.extra_delay_us = Millis(50);
  episodes.max_extra_loss = 0.05;
  link.event_processes = {episodes};
  s.links = {link};
  return s;
}

Scenario Hard() {
  Scenario s = Base("hard",
                    "Disrupted cell: heavy background load, deep congestion episodes with "
                    "30-90% loss, out-of-range periods and frequent handovers.",
                    300);
  LinkProfile link = Cellular("5g_up", 20'000'000);
  link.random_loss = 0.03;
  link.background = Background(1.0, Seconds(1));
  LinkEventProcess congestion =
      Episodes(LinkEventKind::kCongestion, 12, Seconds(290), Seconds(2), Seconds(20));
  congestion.min_capacity_factor = 0.05;
  congestion.max_capacity_factor = 0.3;
  congestion.extra_delay_us = Millis(100);
  congestion.min_extra_loss = 0.3;
  congestion.max_extra_loss = 0.9;
  LinkEventProcess outages =
      Episodes(LinkEventKind::kOutOfRange, 4, Seconds(290), Seconds(2), Seconds(8));
  LinkEventProcess handovers =
      Episodes(LinkEventKind::kHandover, 10, Seconds(290), Millis(300), Millis(300));
  link.event_processes = {congestion, outages, handovers};
  s.links = {link};
  return s;
}

// Constant-rate stream over a lossy link with congestion episodes, the
// setting of the transport and repair comparisons.
Scenario Congested(const std::string& name, const std::string& description) {
  Scenario s = Base(name, description, 120);
  UseFixedRate(&s, 2'000'000);
  LinkProfile link = Cellular("5g_up", 10'000'000);
  link.random_loss = 0.03;
  link.queue_limit_bytes = 500'000;
  LinkEventProcess episodes =
      Episodes(LinkEventKind::kCongestion, 5, Seconds(110), Seconds(2), Seconds(8));
  episodes.min_capacity_factor = 0.3;
  episodes.max_capacity_factor = 0.6;
  episodes.extra_delay_us = Millis(20);
  episodes.min_extra_loss = 0.05;
  episodes.max_extra_loss = 0.2;
  link.event_processes = {episodes};
  s.links = {link};
  return s;
}

Scenario CongestedUdp() {
  Scenario s = Congested("congested_udp",
                         "Congested link, UDP transport, no retransmission or FEC.");
  DisableNack(&s);
  return s;
}

Scenario CongestedTcp() {
  Scenario s = Congested("congested_tcp",
                         "Congested link, reliable in-order TCP transport.");
  DisableNack(&s);
  s.transport = TransportMode::kTcp;
  return s;
}

Scenario CongestedNack() {
  return Congested("congested_nack", "Congested link, UDP with NACK retransmission.");
}

Scenario CongestedHnack() {
  Scenario s = Congested("congested_hnack",
                         "Congested link, UDP with hard NACK: doubled request budget (20) "
                         "and halved request interval (10 ms).");
  s.rtx.max_retransmissions = 20;
  s.receiver.nack.max_requests = 20;
  s.receiver.nack.interval_us = Millis(10);
  return s;
}

Scenario CongestedNackFec() {
  Scenario s = Congested("congested_nack_fec",
                         "Congested link, UDP with NACK and parity FEC.");
  s.fec.enabled = true;
  return s;
}

Scenario EasyTransport(TransportMode mode) {
  Scenario s = Easy();
  s.name = mode == TransportMode::kTcp ? "easy_tcp" : "easy_udp";
  s.description = "Easy link at a constant 2 Mbps over " + TransportModeName(mode) + ".";
  s.duration_us = Seconds(60);
  s.transport = mode;
  UseFixedRate(&s, 2'000'000);
  if (mode == TransportMode::kTcp) DisableNack(&s);
  return s;
}

Scenario MultihomeRev() {
  Scenario s = Base("multihome_rev",
                    "Traffic split evenly over 5G and Wi-Fi; Wi-Fi is lost after 210 s.",
                    300);
  LinkProfile cellular = Cellular("5g_up", 30'000'000);
  cellular.random_loss = 0.001;
  LinkProfile wifi = Wifi(20'000'000);
  wifi.available_until_us = Seconds(210);
  s.links = {cellular, wifi};
  return s;
}

Scenario MultihomeUnequal() {
  Scenario s = Base("multihome_unequal",
                    "Constant 4 Mbps split over a 40 ms 5G path and a 5 ms Wi-Fi path.",
                    60);
  UseFixedRate(&s, 4'000'000);
  LinkProfile cellular = Cellular("5g_up", 30'000'000);
  cellular.base_delay_us = Millis(40);
  s.links = {cellular, Wifi(20'000'000)};
  return s;
}

Scenario Downlink() {
  Scenario s = Base("downlink",
                    "Media on the 5G downlink; feedback rides an uplink with a third of "
                    "its capacity.",
                    120);
  LinkProfile down = Cellular("5g_down", 30'000'000);
  down.random_loss = 0.001;
  LinkProfile up = Cellular("5g_up", 10'000'000);
  s.links = {down};
  s.reverse_link = up;
  return s;
}

Scenario RevLike() {
  Scenario s = Base("rev_like",
                    "Vessel-like uplink: 50 Mbps falling to 20-30 Mbps during long "
                    "degradation periods.",
                    300);
  LinkProfile link = Cellular("5g_up", 50'000'000);
  link.random_loss = 0.002;
  LinkEventProcess degradation =
      Episodes(LinkEventKind::kCongestion, 4, Seconds(280), Seconds(20), Seconds(60));
  degradation.min_capacity_factor = 0.4;
  degradation.max_capacity_factor = 0.6;
  LinkEventProcess handovers =
      Episodes(LinkEventKind::kHandover, 6, Seconds(290), Millis(300), Millis(300));
  link.event_processes = {degradation, handovers};
  s.links = {link};
  return s;
}

Scenario DitLike() {
  Scenario s = Base("dit_like",
                    "Dock-like uplink: 30 Mbps cell whose background load leaves "
                    "10-30 Mbps.",
                    300);
  LinkProfile link = Cellular("5g_up", 30'000'000);
  link.random_loss = 0.002;
  BackgroundLoadConfig background = Background(0.7, Seconds(5));
  link.background = background;
  s.links = {link};
  return s;
}

const std::map<std::string, std::function<Scenario()>>& Registry() {
  static const auto* registry = new std::map<std::string, std::function<Scenario()>>{
      {"easy", Easy},
      {"moderate", Moderate},
      {"hard", Hard},
      {"congested_udp", CongestedUdp},
      {"congested_tcp", CongestedTcp},
      {"congested_nack", CongestedNack},
      {"congested_hnack", CongestedHnack},
      {"congested_nack_fec", CongestedNackFec},
      {"easy_udp", [] { return EasyTransport(TransportMode::kUdp); }},
      {"easy_tcp", [] { return EasyTransport(TransportMode::kTcp); }},
      {"multihome_rev", MultihomeRev},
      {"multihome_unequal", MultihomeUnequal},
      {"downlink", Downlink},
      {"rev_like", RevLike},
      {"dit_like", DitLike},
  };
  return *registry;
}

}  // namespace

std::vector<std::string> PresetNames() {
  std::vector<std::string> names;
  for (const auto& [name, factory] : Registry()) names.push_back(name);
  return names;
}

bool IsPresetName(const std::string& name) { return Registry().count(name) > 0; }

Scenario Preset(const std::string& name) {
  auto it = Registry().find(name);
  if (it == Registry().end()) throw ConfigError("unknown preset \"" + name + "\"");
  Scenario s = it->second();
  s.Validate();
  return s;
}

int64_t NominalCapacityBps(const LinkProfile& link) {
  if (!link.background) return link.base_capacity_bps;
  const BackgroundLoadConfig& b = *link.background;
  const double mean_load = b.share * 0.5 * (b.min_units + b.max_units) * 0.5 *
                           static_cast<double>(b.min_unit_rate_bps + b.max_unit_rate_bps);
  const double floor = 0.05 * static_cast<double>(link.base_capacity_bps);
  return static_cast<int64_t>(
      std::max(floor, static_cast<double>(link.base_capacity_bps) - mean_load));
}

ScriptedController::Table AggressiveScript(const Scenario& scenario) {
  const int64_t rate =
      ClampBitrate(0.8 * static_cast<double>(NominalCapacityBps(scenario.links.front())));
  return {{0, scenario.controller.start_rate_bps}, {Seconds(5), rate}};
}

json PresetTable() {
  json table;
  table["presets"] = json::array();
  for (const auto& name : PresetNames()) {
    table["presets"].push_back(ScenarioToJson(Preset(name)));
  }
  table["comparison_groups"] = {
      {"udp_vs_tcp_congested", {"congested_udp", "congested_tcp"}},
      {"udp_vs_tcp_easy", {"easy_udp", "easy_tcp"}},
      {"nack_on_off", {"congested_udp", "congested_nack"}},
      {"nack_vs_hnack", {"congested_nack", "congested_hnack"}},
      {"fec_on_off", {"congested_nack", "congested_nack_fec"}},
      {"gcc_vs_aggressive", {"moderate"}},
  };
  return table;
}

}  // namespace rtcnetlab
