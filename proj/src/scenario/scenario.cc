#include "rtcnetlab/scenario/scenario.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rtcnetlab/scenario/presets.h"

namespace rtcnetlab {

using nlohmann::json;

namespace {

SimDuration MsToUs(double ms) { return static_cast<SimDuration>(std::llround(ms * 1000.0)); }
double UsToMs(SimDuration us) { return static_cast<double>(us) / 1000.0; }

// Reads one JSON object, recording which keys were consumed so Finish() can
// reject the rest.
class Fields {
 public:
  Fields(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(Where() + ": expected an object");
  }

  std::string Where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  void Bool(const std::string& key, bool* out) {
    if (const json* v = Find(key)) {
      if (!v->is_boolean()) throw ConfigError(Where(key) + ": expected a boolean");
      *out = v->get<bool>();
    }
  }

  template <typename Int>
  void Integer(const std::string& key, Int* out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) throw ConfigError(Where(key) + ": expected an integer");
      *out = static_cast<Int>(v->get<int64_t>());
    }
  }

  void Number(const std::string& key, double* out) {
    if (const json* v = Find(key)) {
      if (!v->is_number()) throw ConfigError(Where(key) + ": expected a number");
      *out = v->get<double>();
    }
  }

  void Ms(const std::string& key, SimDuration* out) {
    double ms = UsToMs(*out);
    if (Find(key)) {
      Number(key, &ms);
      *out = MsToUs(ms);
    }
  }

  void String(const std::string& key, std::string* out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) throw ConfigError(Where(key) + ": expected a string");
      *out = v->get<std::string>();
    }
  }

  void Finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(Where(it.key()) + ": unknown key");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

// Wraps a section validator so its message names the section.
template <typename Fn>
void InSection(const std::string& section, Fn fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(section + ": " + e.what());
  }
}

LinkEvent ParseEvent(const json& j, const std::string& path) {
  Fields f(j, path);
  LinkEvent event;
  std::string kind = LinkEventKindName(event.kind);
  f.String("kind", &kind);
  InSection(f.Where("kind"), [&] { event.kind = ParseLinkEventKind(kind); });
  f.Ms("start_ms", &event.start_us);
  f.Ms("duration_ms", &event.duration_us);
  f.Number("capacity_factor", &event.capacity_factor);
  f.Ms("extra_delay_ms", &event.extra_delay_us);
  f.Number("extra_loss", &event.extra_loss);
  f.Finish();
  return event;
}

LinkEventProcess ParseProcess(const json& j, const std::string& path) {
  Fields f(j, path);
  LinkEventProcess p;
  std::string kind = LinkEventKindName(p.kind);
  f.String("kind", &kind);
  InSection(f.Where("kind"), [&] { p.kind = ParseLinkEventKind(kind); });
  f.Integer("count", &p.count);
  f.Ms("window_start_ms", &p.window_start_us);
  f.Ms("window_end_ms", &p.window_end_us);
  f.Ms("min_duration_ms", &p.min_duration_us);
  f.Ms("max_duration_ms", &p.max_duration_us);
  f.Number("min_capacity_factor", &p.min_capacity_factor);
  f.Number("max_capacity_factor", &p.max_capacity_factor);
  f.Ms("extra_delay_ms", &p.extra_delay_us);
  f.Number("min_extra_loss", &p.min_extra_loss);
  f.Number("max_extra_loss", &p.max_extra_loss);
  f.Finish();
  return p;
}

BackgroundLoadConfig ParseBackground(const json& j, const std::string& path) {
  Fields f(j, path);
  BackgroundLoadConfig b;
  f.Integer("min_units", &b.min_units);
  f.Integer("max_units", &b.max_units);
  f.Integer("min_unit_rate_bps", &b.min_unit_rate_bps);
  f.Integer("max_unit_rate_bps", &b.max_unit_rate_bps);
  f.Ms("redraw_period_ms", &b.redraw_period_us);
  f.Number("share", &b.share);
  f.Finish();
  return b;
}

LinkProfile ParseLink(const json& j, const std::string& path) {
  Fields f(j, path);
  LinkProfile link;
  f.String("name", &link.name);
  f.Integer("base_capacity_bps", &link.base_capacity_bps);
  f.Ms("base_delay_ms", &link.base_delay_us);
  f.Integer("queue_limit_bytes", &link.queue_limit_bytes);
  f.Number("random_loss", &link.random_loss);
  f.Number("handover_burst_factor", &link.handover_burst_factor);
  if (const json* v = f.Find("available_until_ms")) {
    if (!v->is_null()) {
      SimDuration until = 0;
      f.Ms("available_until_ms", &until);
      link.available_until_us = until;
    }
  }
  if (const json* v = f.Find("background")) {
    if (!v->is_null()) link.background = ParseBackground(*v, f.Where("background"));
  }
  if (const json* v = f.Find("events")) {
    if (!v->is_array()) throw ConfigError(f.Where("events") + ": expected an array");
    for (size_t i = 0; i < v->size(); ++i) {
      link.events.push_back(
          ParseEvent((*v)[i], f.Where("events") + "[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = f.Find("event_processes")) {
    if (!v->is_array()) throw ConfigError(f.Where("event_processes") + ": expected an array");
    for (size_t i = 0; i < v->size(); ++i) {
      link.event_processes.push_back(ParseProcess(
          (*v)[i], f.Where("event_processes") + "[" + std::to_string(i) + "]"));
    }
  }
  f.Finish();
  return link;
}

void ParseGcc(const json& j, GccConfig* gcc) {
  Fields f(j, "controller.gcc");
  f.Ms("group_window_ms", &gcc->group_window_us);
  f.Ms("rate_window_ms", &gcc->rate_window_us);
  f.Ms("loss_window_ms", &gcc->loss_window_us);
  f.Integer("detector_gain_cap", &gcc->detector_gain_cap);
  f.Ms("initial_rtt_ms", &gcc->initial_rtt_us);
  f.Number("kalman_process_noise", &gcc->kalman.process_noise);
  f.Number("kalman_chi", &gcc->kalman.chi);
  f.Number("threshold_initial_ms", &gcc->overuse.initial_threshold_ms);
  f.Number("k_up", &gcc->overuse.k_up);
  f.Number("k_down", &gcc->overuse.k_down);
  f.Number("overuse_time_ms", &gcc->overuse.overuse_time_ms);
  f.Number("beta", &gcc->aimd.beta);
  f.Number("increase_factor", &gcc->aimd.increase_factor);
  f.Finish();
}

json GccToJson(const GccConfig& gcc) {
  return {
      {"group_window_ms", UsToMs(gcc.group_window_us)},
      {"rate_window_ms", UsToMs(gcc.rate_window_us)},
      {"loss_window_ms", UsToMs(gcc.loss_window_us)},
      {"detector_gain_cap", gcc.detector_gain_cap},
      {"initial_rtt_ms", UsToMs(gcc.initial_rtt_us)},
      {"kalman_process_noise", gcc.kalman.process_noise},
      {"kalman_chi", gcc.kalman.chi},
      {"threshold_initial_ms", gcc.overuse.initial_threshold_ms},
      {"k_up", gcc.overuse.k_up},
      {"k_down", gcc.overuse.k_down},
      {"overuse_time_ms", gcc.overuse.overuse_time_ms},
      {"beta", gcc.aimd.beta},
      {"increase_factor", gcc.aimd.increase_factor},
  };
}

json EventToJson(const LinkEvent& e) {
  return {{"kind", LinkEventKindName(e.kind)},
          {"start_ms", UsToMs(e.start_us)},
          {"duration_ms", UsToMs(e.duration_us)},
          {"capacity_factor", e.capacity_factor},
          {"extra_delay_ms", UsToMs(e.extra_delay_us)},
          {"extra_loss", e.extra_loss}};
}

json ProcessToJson(const LinkEventProcess& p) {
  return {{"kind", LinkEventKindName(p.kind)},
          {"count", p.count},
          {"window_start_ms", UsToMs(p.window_start_us)},
          {"window_end_ms", UsToMs(p.window_end_us)},
          {"min_duration_ms", UsToMs(p.min_duration_us)},
          {"max_duration_ms", UsToMs(p.max_duration_us)},
          {"min_capacity_factor", p.min_capacity_factor},
          {"max_capacity_factor", p.max_capacity_factor},
          {"extra_delay_ms", UsToMs(p.extra_delay_us)},
          {"min_extra_loss", p.min_extra_loss},
          {"max_extra_loss", p.max_extra_loss}};
}

json LinkToJson(const LinkProfile& link) {
  json j = {{"name", link.name},
            {"base_capacity_bps", link.base_capacity_bps},
            {"base_delay_ms", UsToMs(link.base_delay_us)},
            {"queue_limit_bytes", link.queue_limit_bytes},
            {"random_loss", link.random_loss},
            {"handover_burst_factor", link.handover_burst_factor},
            {"available_until_ms", nullptr},
            {"background", nullptr},
            {"events", json::array()},
            {"event_processes", json::array()}};
  if (link.available_until_us) j["available_until_ms"] = UsToMs(*link.available_until_us);
  if (link.background) {
    const BackgroundLoadConfig& b = *link.background;
    j["background"] = {{"min_units", b.min_units},
                       {"max_units", b.max_units},
                       {"min_unit_rate_bps", b.min_unit_rate_bps},
                       {"max_unit_rate_bps", b.max_unit_rate_bps},
                       {"redraw_period_ms", UsToMs(b.redraw_period_us)},
                       {"share", b.share}};
  }
  for (const LinkEvent& e : link.events) j["events"].push_back(EventToJson(e));
  for (const LinkEventProcess& p : link.event_processes) {
    j["event_processes"].push_back(ProcessToJson(p));
  }
  return j;
}

}  // namespace

std::string TransportModeName(TransportMode mode) {
  return mode == TransportMode::kTcp ? "tcp" : "udp";
}

TransportMode ParseTransportMode(const std::string& name) {
  if (name == "udp") return TransportMode::kUdp;
  if (name == "tcp") return TransportMode::kTcp;
  throw ConfigError("transport must be \"udp\" or \"tcp\", got \"" + name + "\"");
}

std::string ControllerKindName(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kGcc:
      return "gcc";
    case ControllerKind::kFixed:
      return "fixed";
    case ControllerKind::kScripted:
      return "scripted";
    case ControllerKind::kBridge:
      return "bridge";
  }
  return "gcc";
}

ControllerKind ParseControllerKind(const std::string& name) {
  if (name == "gcc") return ControllerKind::kGcc;
  if (name == "fixed") return ControllerKind::kFixed;
  if (name == "scripted") return ControllerKind::kScripted;
  if (name == "bridge") return ControllerKind::kBridge;
  throw ConfigError("controller.kind must be one of gcc, fixed, scripted, bridge; got \"" +
                    name + "\"");
}

void Scenario::Validate() const {
  if (duration_us <= 0) throw ConfigError("duration_s must be > 0");
  InSection("encoder", [&] { encoder.Validate(); });
  InSection("rtp", [&] { rtp.Validate(); });
  InSection("reliability", [&] {
    rtx.Validate();
    fec.Validate();
  });
  InSection("receiver", [&] {
    receiver.jitter.Validate();
    receiver.nack.Validate();
  });
  InSection("feedback", [&] { feedback.Validate(); });
  if (links.empty() || links.size() > 2) {
    throw ConfigError("links: expected one link, or two for multi-homing");
  }
  for (size_t i = 0; i < links.size(); ++i) {
    InSection("links[" + std::to_string(i) + "]", [&] { links[i].Validate(rtp.mtu); });
  }
  if (reverse_link) InSection("reverse_link", [&] { reverse_link->Validate(rtp.mtu); });
  if (links.size() == 2 && transport == TransportMode::kTcp) {
    throw ConfigError("transport: tcp cannot be combined with multi-homing");
  }
  if (!(multihome_ratio > 0 && multihome_ratio < 1)) {
    throw ConfigError("multihome_ratio must lie in (0, 1)");
  }
  if (tcp_ack_delay_us < 0) throw ConfigError("tcp_ack_delay_ms must be >= 0");
  InSection("controller", [&] {
    if (controller.start_rate_bps < kMinBitrateBps || controller.start_rate_bps > kMaxBitrateBps) {
      throw ConfigError("start_rate_bps must lie in [400000, 10000000]");
    }
    if (controller.kind == ControllerKind::kScripted) {
      ScriptedController check(controller.script);
    }
    GccConfig gcc = controller.gcc;
    gcc.start_rate_bps = controller.start_rate_bps;
    gcc.Validate();
  });
}

LinkProfile Scenario::ResolvedReverseLink() const {
  if (reverse_link) return *reverse_link;
  LinkProfile reverse;
  reverse.name = "reverse";
  reverse.base_delay_us = links.front().base_delay_us;
  reverse.base_capacity_bps = 3 * links.front().base_capacity_bps;
  reverse.queue_limit_bytes = links.front().queue_limit_bytes;
  return reverse;
}

Scenario ScenarioFromJson(const json& j) {
  Fields root(j, "");
  Scenario s;
  root.String("name", &s.name);
  root.String("description", &s.description);
  double duration_s = ToSeconds(s.duration_us);
  root.Number("duration_s", &duration_s);
  s.duration_us = static_cast<SimDuration>(std::llround(duration_s * 1e6));
  root.Integer("seed", &s.seed);
  std::string transport = TransportModeName(s.transport);
  root.String("transport", &transport);
  InSection("transport", [&] { s.transport = ParseTransportMode(transport); });
  root.Number("multihome_ratio", &s.multihome_ratio);
  root.Ms("tcp_ack_delay_ms", &s.tcp_ack_delay_us);

  if (const json* v = root.Find("encoder")) {
    Fields f(*v, "encoder");
    f.Integer("fps", &s.encoder.fps);
    f.Integer("bitrate_bps", &s.encoder.target_bitrate_bps);
    f.Integer("keyframe_interval", &s.encoder.keyframe_interval);
    f.Number("keyframe_ratio", &s.encoder.keyframe_ratio);
    f.Integer("encode_latency_us", &s.encoder.encode_latency_us);
    f.Number("jitter", &s.encoder.jitter);
    f.Finish();
  }
  if (const json* v = root.Find("rtp")) {
    Fields f(*v, "rtp");
    f.Integer("mtu", &s.rtp.mtu);
    f.Number("pacing_multiplier", &s.rtp.pacing_multiplier);
    f.Integer("timestamp_clock_hz", &s.rtp.timestamp_clock_hz);
    f.Finish();
  }
  if (const json* v = root.Find("reliability")) {
    Fields f(*v, "reliability");
    f.Bool("nack_enabled", &s.rtx.nack_enabled);
    f.Bool("fec_enabled", &s.fec.enabled);
    f.Integer("fec_group_delta", &s.fec.group_size_delta);
    f.Integer("fec_group_key", &s.fec.group_size_key);
    f.Ms("rtx_age_ms", &s.rtx.max_age_us);
    f.Number("rtx_bandwidth_fraction", &s.rtx.bandwidth_fraction);
    f.Integer("rtx_max_count", &s.rtx.max_retransmissions);
    f.Finish();
  }
  s.receiver.nack.enabled = s.rtx.nack_enabled;
  if (const json* v = root.Find("receiver")) {
    Fields f(*v, "receiver");
    f.Ms("playout_delay_ms", &s.receiver.jitter.playout_delay_us);
    f.Ms("max_stall_ms", &s.receiver.jitter.max_stall_us);
    f.Ms("nack_interval_ms", &s.receiver.nack.interval_us);
    f.Integer("nack_max_count", &s.receiver.nack.max_requests);
    f.Integer("decode_latency_us", &s.receiver.jitter.decode_latency_us);
    f.Bool("keyframe_request_enabled", &s.receiver.jitter.keyframe_request_enabled);
    f.Finish();
  }
  if (const json* v = root.Find("feedback")) {
    Fields f(*v, "feedback");
    f.Ms("rr_period_ms", &s.feedback.rr_period_us);
    f.Ms("twcc_period_ms", &s.feedback.twcc_period_us);
    f.Bool("no_cost", &s.feedback.no_cost);
    f.Finish();
  }
  if (const json* v = root.Find("controller")) {
    Fields f(*v, "controller");
    std::string kind = ControllerKindName(s.controller.kind);
    f.String("kind", &kind);
    InSection("controller.kind", [&] { s.controller.kind = ParseControllerKind(kind); });
    f.Integer("start_rate_bps", &s.controller.start_rate_bps);
    f.Integer("fixed_rate_bps", &s.controller.fixed_rate_bps);
    if (const json* script = f.Find("script")) {
      if (!script->is_array()) throw ConfigError("controller.script: expected an array");
      for (size_t i = 0; i < script->size(); ++i) {
        Fields step((*script)[i], "controller.script[" + std::to_string(i) + "]");
        double t_s = 0;
        int64_t bps = 0;
        step.Number("t_s", &t_s);
        step.Integer("bps", &bps);
        step.Finish();
        s.controller.script.emplace_back(static_cast<SimTime>(std::llround(t_s * 1e6)), bps);
      }
    }
    if (const json* gcc = f.Find("gcc")) ParseGcc(*gcc, &s.controller.gcc);
    f.Finish();
  }
  if (const json* v = root.Find("links")) {
    if (!v->is_array()) throw ConfigError("links: expected an array");
    for (size_t i = 0; i < v->size(); ++i) {
      s.links.push_back(ParseLink((*v)[i], "links[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = root.Find("reverse_link")) {
    if (!v->is_null()) s.reverse_link = ParseLink(*v, "reverse_link");
  }
  root.Finish();
  s.Validate();
  return s;
}

json ScenarioToJson(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["duration_s"] = ToSeconds(s.duration_us);
  j["seed"] = s.seed;
  j["transport"] = TransportModeName(s.transport);
  j["multihome_ratio"] = s.multihome_ratio;
  j["tcp_ack_delay_ms"] = UsToMs(s.tcp_ack_delay_us);
  j["encoder"] = {{"fps", s.encoder.fps},
                  {"bitrate_bps", s.encoder.target_bitrate_bps},
                  {"keyframe_interval", s.encoder.keyframe_interval},
                  {"keyframe_ratio", s.encoder.keyframe_ratio},
                  {"encode_latency_us", s.encoder.encode_latency_us},
                  {"jitter", s.encoder.jitter}};
  j["rtp"] = {{"mtu", s.rtp.mtu},
              {"pacing_multiplier", s.rtp.pacing_multiplier},
              {"timestamp_clock_hz", s.rtp.timestamp_clock_hz}};
  j["reliability"] = {{"nack_enabled", s.rtx.nack_enabled},
                      {"fec_enabled", s.fec.enabled},
                      {"fec_group_delta", s.fec.group_size_delta},
                      {"fec_group_key", s.fec.group_size_key},
                      {"rtx_age_ms", UsToMs(s.rtx.max_age_us)},
                      {"rtx_bandwidth_fraction", s.rtx.bandwidth_fraction},
                      {"rtx_max_count", s.rtx.max_retransmissions}};
  j["receiver"] = {{"playout_delay_ms", UsToMs(s.receiver.jitter.playout_delay_us)},
                   {"max_stall_ms", UsToMs(s.receiver.jitter.max_stall_us)},
                   {"nack_interval_ms", UsToMs(s.receiver.nack.interval_us)},
                   {"nack_max_count", s.receiver.nack.max_requests},
                   {"decode_latency_us", s.receiver.jitter.decode_latency_us},
                   {"keyframe_request_enabled", s.receiver.jitter.keyframe_request_enabled}};
  j["feedback"] = {{"rr_period_ms", UsToMs(s.feedback.rr_period_us)},
                   {"twcc_period_ms", UsToMs(s.feedback.twcc_period_us)},
                   {"no_cost", s.feedback.no_cost}};
  json script = json::array();
  for (const auto& [t, bps] : s.controller.script) {
    script.push_back({{"t_s", ToSeconds(t)}, {"bps", bps}});
  }
  j["controller"] = {{"kind", ControllerKindName(s.controller.kind)},
                     {"start_rate_bps", s.controller.start_rate_bps},
                     {"fixed_rate_bps", s.controller.fixed_rate_bps},
                     {"script", script},
                     {"gcc", GccToJson(s.controller.gcc)}};
  j["links"] = json::array();
  for (const LinkProfile& link : s.links) j["links"].push_back(LinkToJson(link));
  j["reverse_link"] = s.reverse_link ? LinkToJson(*s.reverse_link) : json(nullptr);
  return j;
}

json ScenarioSchema() {
  Scenario defaults;
  defaults.links = {LinkProfile{}};
  json link = {
      {"name", "string"},
      {"base_capacity_bps", "integer, bits/s, > 0"},
      {"base_delay_ms", "number, one-way, >= 0"},
      {"queue_limit_bytes", "integer, > mtu"},
      {"random_loss", "number in [0, 1)"},
      {"handover_burst_factor", "number >= 1, drain rate after a handover relative to base"},
      {"available_until_ms", "number or null; link unusable afterwards"},
      {"background", "object or null: min_units, max_units, min_unit_rate_bps, "
                     "max_unit_rate_bps, redraw_period_ms (0: once), share"},
      {"events", "array of {kind: handover|congestion|out_of_range, start_ms, duration_ms, "
                 "capacity_factor in (0, 1], extra_delay_ms, extra_loss}"},
      {"event_processes", "array of {kind, count, window_start_ms, window_end_ms, "
                          "min_duration_ms, max_duration_ms, min_capacity_factor, "
                          "max_capacity_factor, extra_delay_ms, min_extra_loss, "
                          "max_extra_loss}; resolved per seed"}};
  json fields = {
      {"name", "string"},
      {"description", "string"},
      {"duration_s", "number > 0"},
      {"seed", "integer"},
      {"transport", "udp | tcp"},
      {"multihome_ratio", "number in (0, 1); share of packets on links[0]"},
      {"tcp_ack_delay_ms", "number >= 0"},
      {"encoder", {{"fps", "integer > 0"},
                   {"bitrate_bps", "integer in [400000, 10000000]"},
                   {"keyframe_interval", "integer >= 0; 0 = infinite GOP"},
                   {"keyframe_ratio", "number >= 1"},
                   {"encode_latency_us", "integer >= 0"},
                   {"jitter", "number in [0, 1)"}}},
      {"rtp", {{"mtu", "integer bytes"},
               {"pacing_multiplier", "number >= 1"},
               {"timestamp_clock_hz", "integer > 0"}}},
      {"reliability", {{"nack_enabled", "boolean"},
                       {"fec_enabled", "boolean"},
                       {"fec_group_delta", "integer >= 1"},
                       {"fec_group_key", "integer >= 1"},
                       {"rtx_age_ms", "number > 0"},
                       {"rtx_bandwidth_fraction", "number in (0, 1]"},
                       {"rtx_max_count", "integer >= 0"}}},
      {"receiver", {{"playout_delay_ms", "number >= 0"},
                    {"max_stall_ms", "number >= 0"},
                    {"nack_interval_ms", "number > 0"},
                    {"nack_max_count", "integer >= 0"},
                    {"decode_latency_us", "integer >= 0"},
                    {"keyframe_request_enabled", "boolean"}}},
      {"feedback", {{"rr_period_ms", "number > 0"},
                    {"twcc_period_ms", "number > 0"},
                    {"no_cost", "boolean"}}},
      {"controller", {{"kind", "gcc | fixed | scripted | bridge"},
                      {"start_rate_bps", "integer in [400000, 10000000]"},
                      {"fixed_rate_bps", "integer"},
                      {"script", "array of {t_s, bps}, strictly increasing t_s"},
                      {"gcc", GccToJson(GccConfig{})}}},
      {"links", json::array({link})},
      {"reverse_link", "link object or null (default: clean, same delay, 3x capacity)"}};
  return {{"format", "rtcnetlab-scenario"},
          {"version", 1},
          {"strict", true},
          {"fields", fields},
          {"defaults", ScenarioToJson(defaults)}};
}

Scenario LoadScenario(const std::string& name_or_path) {
  if (IsPresetName(name_or_path)) return Preset(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) {
    throw ConfigError("unknown scenario \"" + name_or_path +
                      "\": not a preset name and not a readable file");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(name_or_path + ": " + e.what());
  }
  return ScenarioFromJson(j);
}

}  // namespace rtcnetlab
