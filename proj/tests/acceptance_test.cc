// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtcnetlab/bridge/episode.h"
#include "rtcnetlab/feedback/twcc.h"
#include "rtcnetlab/rate/aimd.h"
#include "rtcnetlab/rate/delay_estimator.h"
#include "rtcnetlab/rate/overuse_detector.h"
#include "rtcnetlab/rate/simple_controllers.h"
#include "rtcnetlab/receiver/nack_module.h"
#include "rtcnetlab/reliability/fec.h"
#include "rtcnetlab/rtp/packetizer.h"
#include "rtcnetlab/scenario/presets.h"
#include "rtcnetlab/session/session.h"
#include "rtcnetlab/sim/random.h"

namespace rtcnetlab {
namespace {

using nlohmann::json;

// Pinned tolerances.
constexpr double kMaxWallSecondsPerRun = 30.0;
constexpr int kConservationPairs = 20;
constexpr int kFecTrials = 10'000;
constexpr int kTwccPackets = 100'000;
constexpr SimDuration kTwccToleranceUs = 250;
constexpr double kTcpRttFactor = 2.0;
constexpr double kNackPlrFactor = 0.5;
constexpr double kHnackMaxPlrDelta = 0.01;
constexpr double kGccConvergenceShare = 0.90;
constexpr SimDuration kGccFinalWindow = Seconds(60);
constexpr double kGccP95CapacityShare = 0.60;
constexpr double kAggressiveBytesFactor = 1.25;
constexpr double kKalmanRelTolerance = 0.01;
constexpr int kKalmanUpdates = 50;
constexpr int kDeadBandSeeds = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

struct Run {
  json summary;
  std::string csv;
  double wall_s = 0;
  uint64_t reordered = 0;
  uint64_t order_violations = 0;
  std::vector<std::pair<SimTime, int64_t>> targets;
  std::optional<double> capacity_bps;
};

Run Execute(Scenario scenario, std::unique_ptr<RateController> controller = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  Session session(std::move(scenario), std::move(controller));
  session.Run();
  Run r;
  r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.summary = session.Summary();
  std::ostringstream csv;
  session.metrics().WriteCsv(csv);
  r.csv = csv.str();
  r.reordered = session.reordered_arrivals();
  r.order_violations = session.jitter_buffer().release_order_violations();
  r.targets = session.target_history();
  r.capacity_bps = session.mean_capacity_bps();
  return r;
}

double PlayoutPlr(const Run& r) { return r.summary["loss"]["playout_plr"].get<double>(); }
double MeanRtt(const Run& r) { return r.summary["rtt"]["mean_ms"].get<double>(); }
double RxMbytes(const Run& r) { return r.summary["media"]["rx_total_mbytes"].get<double>(); }

// Shared preset runs, each computed once.
class Runs {
 public:
  const Run& Get(const std::string& preset) {
    auto it = cache_.find(preset);
    if (it == cache_.end()) it = cache_.emplace(preset, Execute(Preset(preset))).first;
    return it->second;
  }

 private:
  std::map<std::string, Run> cache_;
};

Outcome Determinism(Runs& runs) {
  const Run& a = runs.Get("easy");
  const Run b = Execute(Preset("easy"));
  const double slowest = std::max(a.wall_s, b.wall_s);
  const bool identical = a.csv == b.csv;
  return {identical && slowest < kMaxWallSecondsPerRun,
          Format("metrics.csv identical=%.0f, slowest run %.2f s (limit %.0f s)", identical,
                 slowest, kMaxWallSecondsPerRun)};
}

bool Conserved(const json& link) {
  return link["sent"].get<uint64_t>() ==
         link["delivered"].get<uint64_t>() + link["dropped_queue"].get<uint64_t>() +
             link["dropped_random"].get<uint64_t>() + link["dropped_range"].get<uint64_t>() +
             link["in_flight"].get<uint64_t>();
}

Outcome Conservation() {
  RngStream rng(2024, "acceptance.conservation");
  const std::vector<std::string>& names = PresetNames();
  int held = 0;
  std::string broken;
  for (int i = 0; i < kConservationPairs; ++i) {
    Scenario s = Preset(names[rng.UniformInt(0, static_cast<int64_t>(names.size()) - 1)]);
    s.seed = static_cast<uint64_t>(rng.UniformInt(1, 1'000'000));
    const Run r = Execute(s);
    bool ok = Conserved(r.summary["conservation"]) && Conserved(r.summary["reverse_link"]);
    for (const json& link : r.summary["links"]) ok = ok && Conserved(link);
    if (ok) {
      ++held;
    } else {
      broken += " " + s.name + "/" + std::to_string(s.seed);
    }
  }
  return {held == kConservationPairs,
          Format("identity held on %.0f of %.0f (scenario, seed) pairs", held,
                 kConservationPairs) +
              broken};
}

std::vector<RtpPacket> RandomGroup(RngStream& rng, int count, uint64_t key) {
  const uint16_t first = static_cast<uint16_t>(rng.UniformInt(0, 65535));
  std::vector<RtpPacket> group;
  for (int i = 0; i < count; ++i) {
    RtpPacket p;
    p.stream_seq = static_cast<uint16_t>(first + i);
    p.frame_id = key;
    p.payload_size = rng.UniformInt(1, 1230);
    p.payload = MakeSyntheticPayload(key * 1000 + i, p.payload_size);
    p.index_in_frame = i;
    p.packets_in_frame = count;
    p.frame_start = i == 0;
    p.marker = i == count - 1;
    group.push_back(p);
  }
  return group;
}

Outcome FecOracle() {
  RngStream rng(21, "acceptance.fec");
  int exact = 0;
  int multi_recovered = 0;
  for (int trial = 0; trial < kFecTrials; ++trial) {
    const int count = static_cast<int>(rng.UniformInt(1, 10));
    const std::vector<RtpPacket> group = RandomGroup(rng, count, trial);
    const RtpPacket fec = MakeFecPacket(group, trial, 0);
    const int lost = static_cast<int>(rng.UniformInt(0, count - 1));
    std::vector<RtpPacket> survivors;
    for (int i = 0; i < count; ++i) {
      if (i != lost) survivors.push_back(group[i]);
    }
    const std::optional<RtpPacket> got = RecoverWithFec(fec, survivors);
    const RtpPacket& want = group[lost];
    if (got && got->stream_seq == want.stream_seq && got->payload_size == want.payload_size &&
        got->marker == want.marker && got->index_in_frame == want.index_in_frame &&
        *got->payload == *want.payload) {
      ++exact;
    }
  }
  for (int trial = 0; trial < kFecTrials; ++trial) {
    const int count = static_cast<int>(rng.UniformInt(2, 10));
    std::vector<RtpPacket> group = RandomGroup(rng, count, trial);
    const RtpPacket fec = MakeFecPacket(group, trial, 0);
    const int losses = static_cast<int>(rng.UniformInt(2, count));
    // Drop a random subset of `losses` packets.
    for (int i = count - 1; i > 0; --i) {
      std::swap(group[i], group[rng.UniformInt(0, i)]);
    }
    std::vector<RtpPacket> survivors(group.begin() + losses, group.end());
    if (RecoverWithFec(fec, survivors)) ++multi_recovered;
  }
  return {exact == kFecTrials && multi_recovered == 0,
          Format("single loss: %.0f/%.0f exact; two or more: %.0f/%.0f recovered", exact,
                 kFecTrials, multi_recovered, kFecTrials)};
}

Outcome NackGates() {
  const NackConfig config;
  uint32_t worst_count = 0;
  SimDuration worst_spacing = Seconds(3600);
  size_t worst_list = 0;
  uint64_t requests = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream rng(seed, "acceptance.nack");
    NackModule nack(config);
    std::vector<std::pair<SimTime, uint16_t>> pending;
    uint16_t seq = static_cast<uint16_t>(rng.UniformInt(0, 65535));
    SimTime now = 0;
    for (int step = 0; step < 30'000; ++step) {
      now += rng.UniformInt(100, 2000);
      if (rng.Bernoulli(0.001)) {
        seq = static_cast<uint16_t>(seq + rng.UniformInt(100, 1500));
      } else if (!rng.Bernoulli(0.05)) {
        pending.emplace_back(now + rng.UniformInt(0, Millis(60)), seq);
      }
      ++seq;
      std::sort(pending.begin(), pending.end());
      while (!pending.empty() && pending.front().first <= now) {
        nack.OnPacket(pending.front().second, now);
        if (rng.Bernoulli(0.01)) nack.OnPacket(pending.front().second, now);
        pending.erase(pending.begin());
      }
      nack.Process(now);
    }
    const NackGateStats& stats = nack.stats();
    worst_count = std::max<uint32_t>(worst_count, stats.max_requests_for_one_seq);
    worst_spacing = std::min(worst_spacing, stats.min_spacing_us);
    worst_list = std::max<size_t>(worst_list, stats.max_list_size);
    requests += stats.requests_sent;
  }
  const bool pass = worst_count <= static_cast<uint32_t>(config.max_requests) &&
                    worst_spacing >= config.interval_us &&
                    worst_list <= config.max_list_size && requests > 0;
  return {pass, Format("max per seq %.0f, min spacing %.1f ms, max list %.0f, requests %.0f",
                       worst_count, worst_spacing / 1000.0, worst_list, requests)};
}

Outcome TwccRoundTrip() {
  RngStream rng(17, "acceptance.twcc");
  TwccRecorder recorder;
  TransportFeedbackAdapter adapter;
  std::map<int64_t, SimTime> true_arrival;
  std::vector<std::pair<SimTime, int64_t>> in_flight;
  std::map<int64_t, int> reported;
  SimDuration worst = 0;
  int64_t compared = 0;
  auto deliver_until = [&](SimTime t) {
    std::sort(in_flight.begin(), in_flight.end());
    size_t i = 0;
    for (; i < in_flight.size() && in_flight[i].first <= t; ++i) {
      if (recorder.OnPacket(in_flight[i].second, in_flight[i].first)) {
        true_arrival[in_flight[i].second] = in_flight[i].first;
      }
    }
    in_flight.erase(in_flight.begin(), in_flight.begin() + i);
  };
  auto check = [&](const std::vector<PacketResult>& results) {
    for (const PacketResult& r : results) {
      ++reported[r.sent.transport_seq];
      if (r.status != PacketResult::Status::kReceived) continue;
      auto it = true_arrival.find(r.sent.transport_seq);
      worst = it == true_arrival.end() ? Seconds(3600)
                                       : std::max(worst, std::abs(r.arrival - it->second));
      ++compared;
    }
  };
  SimTime now = 0;
  SimTime next_feedback = Millis(100);
  for (int64_t seq = 0; seq < kTwccPackets; ++seq) {
    now += rng.UniformInt(50, 1500);
    adapter.OnPacketSent({seq, now, 1200, false});
    if (!rng.Bernoulli(0.03)) {
      in_flight.emplace_back(now + Millis(20) + rng.UniformInt(0, Millis(15)), seq);
    }
    if (now >= next_feedback) {
      deliver_until(now);
      if (std::optional<TwccFeedback> fb = recorder.BuildFeedback(now)) check(adapter.OnFeedback(*fb));
      next_feedback += Millis(100);
    }
  }
  deliver_until(now + Seconds(1));
  if (std::optional<TwccFeedback> fb = recorder.BuildFeedback(now + Seconds(1))) {
    check(adapter.OnFeedback(*fb));
  }
  bool once = static_cast<int64_t>(reported.size()) == kTwccPackets;
  for (const auto& [s, count] : reported) once = once && count == 1;
  return {worst <= kTwccToleranceUs && once,
          Format("worst error %.0f us over %.0f received packets (limit %.0f us), each "
                 "reported once=%.0f",
                 worst, compared, kTwccToleranceUs, once)};
}

Outcome UdpVsTcp(Runs& runs) {
  const double udp = MeanRtt(runs.Get("congested_udp"));
  const double tcp = MeanRtt(runs.Get("congested_tcp"));
  return {tcp >= kTcpRttFactor * udp,
          Format("mean RTT tcp %.1f ms vs udp %.1f ms (x%.2f, need >= %.1f)", tcp, udp,
                 udp > 0 ? tcp / udp : 0, kTcpRttFactor)};
}

Outcome NackEffectiveness(Runs& runs) {
  const Run& udp = runs.Get("congested_udp");
  const Run& nack = runs.Get("congested_nack");
  const Run& tcp = runs.Get("congested_tcp");
  const double nack_overhead = MeanRtt(nack) - MeanRtt(udp);
  const double tcp_overhead = MeanRtt(tcp) - MeanRtt(udp);
  const bool plr_ok = PlayoutPlr(nack) <= kNackPlrFactor * PlayoutPlr(udp);
  return {plr_ok && nack_overhead < tcp_overhead,
          Format("playout PLR nack %.4f vs none %.4f; RTT overhead nack %+.1f ms vs tcp %+.1f ms",
                 PlayoutPlr(nack), PlayoutPlr(udp), nack_overhead, tcp_overhead)};
}

Outcome FecTradeOff(Runs& runs) {
  const Run& off = runs.Get("congested_nack");
  const Run& on = runs.Get("congested_nack_fec");
  const double rx_off = off.summary["media"]["rx_rate_mbps_mean"].get<double>();
  const double rx_on = on.summary["media"]["rx_rate_mbps_mean"].get<double>();
  return {PlayoutPlr(on) < PlayoutPlr(off) && rx_on > rx_off,
          Format("playout PLR fec %.4f vs off %.4f; rx rate fec %.3f vs off %.3f Mbps",
                 PlayoutPlr(on), PlayoutPlr(off), rx_on, rx_off)};
}

Outcome HnackMarginality(Runs& runs) {
  const Run& nack = runs.Get("congested_nack");
  const Run& hnack = runs.Get("congested_hnack");
  const double dplr = PlayoutPlr(hnack) - PlayoutPlr(nack);
  const double drtt = MeanRtt(hnack) - MeanRtt(nack);
  return {std::fabs(dplr) <= kHnackMaxPlrDelta && drtt >= 0,
          Format("dPLR %+.2f pp (limit %.0f pp), dRTT %+.2f ms", dplr * 100,
                 kHnackMaxPlrDelta * 100, drtt)};
}

Outcome GccConvergence(Runs& runs) {
  const Run& r = runs.Get("easy");
  const SimTime end = static_cast<SimTime>(r.summary["duration_s"].get<double>() * 1e6);
  const SimTime from = end - kGccFinalWindow;
  double weighted = 0;
  for (size_t i = 0; i < r.targets.size(); ++i) {
    const SimTime a = std::max(r.targets[i].first, from);
    const SimTime b = i + 1 < r.targets.size() ? r.targets[i + 1].first : end;
    if (b > a) weighted += static_cast<double>(r.targets[i].second) * static_cast<double>(b - a);
  }
  const double mean = weighted / static_cast<double>(kGccFinalWindow);
  int late_decreases = 0;
  for (const json& t : r.summary["rate"]["decrease_times_s"]) {
    late_decreases += t.get<double>() * 1e6 >= static_cast<double>(from);
  }
  const double capacity = r.capacity_bps.value_or(0);
  return {mean >= kGccConvergenceShare * capacity && late_decreases == 0,
          Format("final 60 s mean target %.2f Mbps vs capacity %.2f Mbps (%.1f%%), "
                 "decreases in window %.0f",
                 mean / 1e6, capacity / 1e6, capacity > 0 ? 100 * mean / capacity : 0,
                 late_decreases)};
}

Outcome GccConservatism(Runs& runs) {
  const Run& gcc = runs.Get("moderate");
  const Scenario s = Preset("moderate");
  const Run aggressive = Execute(s, std::make_unique<ScriptedController>(AggressiveScript(s)));
  const double p95 = gcc.summary["rate"]["target_p95_mbps"].get<double>();
  const json& cap = gcc.summary["rate"]["capacity_between_episodes_mbps"];
  const double capacity = cap.is_null() ? 0.0 : cap.get<double>();
  const double ratio = RxMbytes(gcc) > 0 ? RxMbytes(aggressive) / RxMbytes(gcc) : 0;
  return {capacity > 0 && p95 < kGccP95CapacityShare * capacity &&
              ratio >= kAggressiveBytesFactor,
          Format("gcc p95 %.2f Mbps vs %.2f Mbps between episodes (%.1f%%); aggressive/gcc "
                 "received bytes x%.2f",
                 p95, capacity, capacity > 0 ? 100 * p95 / capacity : 0, ratio)};
}

// Independent textbook scalar Kalman filter.
struct ReferenceKalman {
  double m = 0.0;
  double p = 0.1;
  double r = 50.0;

  void Step(double d, double rate_hz) {
    const double q = 1e-3;
    const double chi = 0.01;
    const double p_prior = p + q;
    const double innovation = d - m;
    const double alpha = std::pow(1.0 - chi, 30.0 / (1000.0 * rate_hz));
    r = std::max(1.0, alpha * r + (1.0 - alpha) * std::min(innovation * innovation, 9.0 * r));
    const double gain = p_prior / (p_prior + r);
    m += gain * innovation;
    p = (1.0 - gain) * p_prior;
  }
};

Outcome KalmanAndPulse() {
  RngStream rng(31, "acceptance.kalman");
  double worst_rel = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ScalarKalman filter;
    ReferenceKalman reference;
    // Ramp: the delay gradient climbs linearly, plus noise.
    const double slope = rng.Uniform(-0.1, 0.1);
    const double rate_hz = rng.Uniform(20.0, 200.0);
    for (int i = 0; i < kKalmanUpdates; ++i) {
      const double d = slope * i + rng.Uniform(-1.0, 1.0);
      filter.Update(d, rate_hz);
      reference.Step(d, rate_hz);
    }
    const double scale = std::max(std::fabs(reference.m), 1e-6);
    worst_rel = std::max(worst_rel, std::fabs(filter.estimate() - reference.m) / scale);
  }
  int triggered = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    OveruseDetector detector;
    SimTime now = 0;
    for (int i = 0; i < 200; ++i) {
      now += 5000;
      detector.Detect(0.0, 5.0, now);
    }
    const double spacing_ms = rng.Uniform(0.5, 9.9);
    const int samples = static_cast<int>(std::ceil(10.0 / spacing_ms)) - 1;
    const double height = rng.Uniform(detector.threshold() + 0.1, 500.0);
    for (int i = 0; i < samples; ++i) {
      now += static_cast<SimTime>(spacing_ms * 1000);
      triggered += detector.Detect(height, spacing_ms, now) == BandwidthUsage::kOveruse;
    }
    now += 5000;
    triggered += detector.Detect(0.0, 5.0, now) == BandwidthUsage::kOveruse;
  }
  return {worst_rel <= kKalmanRelTolerance && triggered == 0,
          Format("worst relative error %.2e after %.0f updates; sub-10 ms pulses triggering: %.0f",
                 worst_rel, kKalmanUpdates, triggered)};
}

Outcome LossBranchTable() {
  const double losses[] = {0, 0.01, 0.02, 0.05, 0.10, 0.15, 0.5};
  const double cap = 10'000'000;
  int cells = 0;
  int matches = 0;
  for (double p : losses) {
    for (double a = 150'000; a <= 10'000'000; a += 50'000) {
      double want;
      if (p > 0.10) {
        want = a * (1.0 - 0.5 * p);
      } else if (p < 0.02) {
        want = std::min(1.05 * a, cap);
      } else {
        want = a;
      }
      ++cells;
      matches += LossBasedRate(a, p, cap) == want;
    }
  }
  return {matches == cells, Format("%.0f of %.0f (loss, delay-based rate) cells exact", matches,
                                   cells)};
}

Outcome DeadBand() {
  int changes = 0;
  int violations = 0;
  int actions = 0;
  for (int seed = 1; seed <= kDeadBandSeeds; ++seed) {
    RngStream rng(seed, "acceptance.deadband");
    EpisodeConfig config;
    config.scenario = "moderate";
    config.seed = seed;
    config.duration_s = 120;
    Episode episode(config, seed);
    episode.Reset();
    while (!episode.done()) {
      const int64_t before = episode.session().target_bps();
      const double action = rng.Bernoulli(0.5) ? before * rng.Uniform(0.85, 1.15)
                                               : rng.Uniform(0.0, 2.5e7);
      episode.Step(action);
      const ActionOutcome& o = episode.actions().back();
      ++actions;
      const double rel = std::fabs(double(o.applied_bps - before)) / double(before);
      if (o.changed) {
        ++changes;
        violations += !(rel > kDeadBand);
      } else {
        const double wanted = std::fabs(double(o.requested_bps - before)) / double(before);
        violations += wanted > kDeadBand && o.requested_bps != before;
      }
    }
  }
  return {violations == 0 && changes > 0,
          Format("%.0f actions, %.0f applied changes, %.0f dead-band violations", actions,
                 changes, violations)};
}

Outcome MultihomeReorder(Runs& runs) {
  const Run& r = runs.Get("multihome_unequal");
  return {r.reordered > 0 && r.order_violations == 0,
          Format("out-of-order transport_seq arrivals %.0f; release order violations %.0f",
                 r.reordered, r.order_violations)};
}

}  // namespace
}  // namespace rtcnetlab

int main() {
  using namespace rtcnetlab;
  Runs runs;
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"determinism", [&] { return Determinism(runs); }},
      {"conservation", [] { return Conservation(); }},
      {"fec_oracle", [] { return FecOracle(); }},
      {"nack_gates", [] { return NackGates(); }},
      {"twcc_round_trip", [] { return TwccRoundTrip(); }},
      {"udp_vs_tcp", [&] { return UdpVsTcp(runs); }},
      {"nack_effectiveness", [&] { return NackEffectiveness(runs); }},
      {"fec_trade_off", [&] { return FecTradeOff(runs); }},
      {"hnack_marginality", [&] { return HnackMarginality(runs); }},
      {"gcc_convergence", [&] { return GccConvergence(runs); }},
      {"gcc_conservatism", [&] { return GccConservatism(runs); }},
      {"kalman_detector", [] { return KalmanAndPulse(); }},
      {"loss_branch_table", [] { return LossBranchTable(); }},
      {"dead_band", [] { return DeadBand(); }},
      {"multihome_reorder", [&] { return MultihomeReorder(runs); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
