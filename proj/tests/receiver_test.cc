#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "rtcnetlab/receiver/fec_receiver.h"
#include "rtcnetlab/receiver/jitter_buffer.h"
#include "rtcnetlab/receiver/nack_module.h"
#include "rtcnetlab/reliability/fec.h"
#include "rtcnetlab/rtp/packetizer.h"
#include "rtcnetlab/sim/random.h"

namespace rtcnetlab {
namespace {

using Seqs = std::vector<uint16_t>;

TEST(NackModuleTest, GapWaitsOneIntervalThenRepeatsAtTheInterval) {
  NackModule nack(NackConfig{});
  nack.OnPacket(0, 0);
  nack.OnPacket(1, 0);
  nack.OnPacket(4, 0);
  EXPECT_EQ(nack.missing_count(), 2u);
  EXPECT_TRUE(nack.Process(Millis(10)).empty());
  EXPECT_EQ(nack.Process(Millis(20)), (Seqs{2, 3}));
  EXPECT_TRUE(nack.Process(Millis(30)).empty());
  EXPECT_EQ(nack.Process(Millis(40)), (Seqs{2, 3}));
}

TEST(NackModuleTest, ReorderedPacketWithinTheWaitIsNeverRequested) {
  NackModule nack(NackConfig{});
  nack.OnPacket(10, 0);
  nack.OnPacket(12, Millis(1));
  EXPECT_TRUE(nack.IsMissing(11));
  EXPECT_TRUE(nack.OnPacket(11, Millis(5)));
  EXPECT_FALSE(nack.IsMissing(11));
  EXPECT_TRUE(nack.Process(Millis(30)).empty());
  EXPECT_FALSE(nack.OnPacket(11, Millis(6)));
}

TEST(NackModuleTest, EntryExpiresAfterMaxRequests) {
  NackConfig config;
  config.max_requests = 3;
  NackModule nack(config);
  nack.OnPacket(0, 0);
  nack.OnPacket(2, 0);
  int requests = 0;
  for (SimTime t = 0; t <= Millis(500); t += Millis(5)) requests += nack.Process(t).size();
  EXPECT_EQ(requests, 3);
  EXPECT_FALSE(nack.IsMissing(1));
  EXPECT_EQ(nack.stats().expired_max_requests, 1u);
}

TEST(NackModuleTest, ListSizeIsBounded) {
  NackModule nack(NackConfig{});
  nack.OnPacket(0, 0);
  nack.OnPacket(5000, 0);
  EXPECT_EQ(nack.missing_count(), 1000u);
  EXPECT_TRUE(nack.IsMissing(4999));
  EXPECT_FALSE(nack.IsMissing(3999));
  EXPECT_EQ(nack.stats().evicted_list_full, 3999u);
}

TEST(NackModuleTest, OldEntriesAgeOutBySequenceDistance) {
  NackConfig config;
  config.max_seq_age = 100;
  NackModule nack(config);
  nack.OnPacket(0, 0);
  nack.OnPacket(2, 0);
  for (uint16_t s = 3; s <= 101; ++s) nack.OnPacket(s, 0);
  EXPECT_TRUE(nack.IsMissing(1));
  nack.OnPacket(102, 0);
  EXPECT_FALSE(nack.IsMissing(1));
  EXPECT_EQ(nack.stats().evicted_too_old, 1u);
}

TEST(NackModuleTest, DecodableKeyframeClearsOlderEntries) {
  NackModule nack(NackConfig{});
  nack.OnPacket(0, 0);
  nack.OnPacket(10, 0);
  nack.OnPacket(20, 0);
  nack.OnDecodableKeyframe(10);
  EXPECT_FALSE(nack.IsMissing(5));
  EXPECT_TRUE(nack.IsMissing(15));
  nack.ClearUpTo(15);
  EXPECT_FALSE(nack.IsMissing(15));
  EXPECT_TRUE(nack.IsMissing(16));
}

TEST(NackModuleTest, GapsAcrossTheWrapAreTracked) {
  NackModule nack(NackConfig{});
  nack.OnPacket(65533, 0);
  nack.OnPacket(2, 0);
  EXPECT_EQ(nack.Process(Millis(20)), (Seqs{65534, 65535, 0, 1}));
}

TEST(NackModuleTest, DisabledModuleNeverRequests) {
  NackConfig config;
  config.enabled = false;
  NackModule nack(config);
  nack.OnPacket(0, 0);
  nack.OnPacket(9, 0);
  EXPECT_TRUE(nack.Process(Seconds(1)).empty());
}

// Adversarial property: bursty loss, heavy reordering, late duplicates and
// sequence wrap. Every request, observed from outside, must respect the
// count cap, the spacing and the list bound.
TEST(NackModulePropertyTest, GatesHoldUnderAdversarialLoss) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream rng(seed, "nack.adversary");
    NackConfig config;
    NackModule nack(config);
    std::map<uint16_t, std::vector<SimTime>> requests;
    std::vector<std::pair<SimTime, uint16_t>> pending;
    uint16_t seq = static_cast<uint16_t>(rng.UniformInt(0, 65535));
    SimTime now = 0;
    for (int step = 0; step < 30'000; ++step) {
      now += rng.UniformInt(100, 2000);
      // Bursts of up to 1500 consecutive losses, 5% base loss.
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
      for (uint16_t s : nack.Process(now)) requests[s].push_back(now);
      ASSERT_LE(nack.missing_count(), config.max_list_size);
    }
    for (const auto& [s, times] : requests) {
      // A sequence number reused after the wrap is a different packet; the
      // entries are separated by far more than the age limit in time.
      for (size_t i = 1; i < times.size(); ++i) {
        ASSERT_GE(times[i] - times[i - 1], config.interval_us) << "seq " << s;
      }
    }
    const NackGateStats& stats = nack.stats();
    EXPECT_LE(stats.max_requests_for_one_seq, config.max_requests);
    EXPECT_GE(stats.min_spacing_us, config.interval_us);
    EXPECT_LE(stats.max_list_size, config.max_list_size);
    EXPECT_GT(stats.requests_sent, 0u);
  }
}

// Frame helpers for the jitter buffer.
struct FrameFixture {
  ExpectedFrame expected;
  std::vector<RtpPacket> packets;
};

class FrameSource {
 public:
  FrameSource() : packetizer_(RtpConfig{}, 0) {}

  FrameFixture Next(int packets, bool keyframe) {
    MediaFrame frame;
    frame.frame_id = next_id_++;
    frame.capture_time = static_cast<SimTime>(frame.frame_id) * Millis(50);
    frame.encode_done_time = frame.capture_time + 1000;
    frame.size = 1230 * packets;
    frame.is_keyframe = keyframe;
    FrameFixture f;
    f.expected = {frame.frame_id, frame.capture_time, frame.encode_done_time, packets};
    f.packets = packetizer_.Packetize(frame);
    return f;
  }

 private:
  Packetizer packetizer_;
  uint64_t next_id_ = 0;
};

TEST(JitterBufferTest, CompleteFramePlaysAtItsSlot) {
  JitterBuffer buffer(JitterBufferConfig{});
  FrameSource source;
  FrameFixture f = source.Next(3, true);
  buffer.ExpectFrame(f.expected);
  for (const RtpPacket& p : f.packets) buffer.InsertPacket(p, Millis(30), 2000);
  EXPECT_TRUE(buffer.Advance(Millis(199)).empty());
  std::vector<PlayoutEvent> events = buffer.Advance(Millis(200));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, PlayoutEvent::Kind::kPlayed);
  EXPECT_EQ(events[0].playout_time, Millis(200) + 1000);
  const LatencyBreakdown& l = events[0].latency;
  EXPECT_EQ(l.processing, 1000);
  EXPECT_EQ(l.transmission, 2000);
  EXPECT_EQ(l.decoding, events[0].playout_time - Millis(30));
  EXPECT_EQ(l.total(), events[0].playout_time - f.expected.capture_time);
}

TEST(JitterBufferTest, LateFrameStallsTheClockThenCatchesUp) {
  JitterBuffer buffer(JitterBufferConfig{});
  FrameSource source;
  FrameFixture a = source.Next(1, true);
  FrameFixture b = source.Next(1, false);
  buffer.ExpectFrame(a.expected);
  buffer.ExpectFrame(b.expected);
  buffer.InsertPacket(a.packets[0], Millis(240), 1000);
  buffer.InsertPacket(b.packets[0], Millis(245), 1000);
  EXPECT_EQ(buffer.NextDeadline(), Millis(240));
  std::vector<PlayoutEvent> events = buffer.Advance(Millis(240));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, PlayoutEvent::Kind::kPlayed);
  EXPECT_EQ(events[0].stall_us, Millis(40));
  EXPECT_EQ(buffer.current_stall_offset(), Millis(40));
  events = buffer.Advance(Millis(290));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(buffer.current_stall_offset(), Millis(15));
}

TEST(JitterBufferTest, MissingFrameIsSkippedAndBreaksTheChain) {
  JitterBuffer buffer(JitterBufferConfig{});
  FrameSource source;
  FrameFixture key = source.Next(2, true);
  FrameFixture lost = source.Next(2, false);
  FrameFixture delta = source.Next(2, false);
  FrameFixture next_key = source.Next(2, true);
  for (const FrameFixture* f : {&key, &lost, &delta, &next_key}) {
    buffer.ExpectFrame(f->expected);
  }
  for (const RtpPacket& p : key.packets) buffer.InsertPacket(p, Millis(10), 1000);
  buffer.InsertPacket(lost.packets[0], Millis(60), 1000);
  for (const RtpPacket& p : delta.packets) buffer.InsertPacket(p, Millis(110), 1000);
  for (const RtpPacket& p : next_key.packets) buffer.InsertPacket(p, Millis(160), 1000);

  std::vector<PlayoutEvent> events = buffer.Advance(Seconds(1));
  ASSERT_EQ(events.size(), 4u);
  EXPECT_EQ(events[0].kind, PlayoutEvent::Kind::kPlayed);
  EXPECT_EQ(events[1].kind, PlayoutEvent::Kind::kSkipped);
  EXPECT_EQ(events[1].missing_packets, 1);
  EXPECT_FALSE(events[1].undecodable);
  EXPECT_TRUE(events[1].request_keyframe);
  // Skipped at the stall limit: nominal slot plus max_stall.
  EXPECT_EQ(events[1].decided_at, Millis(50) + Millis(200) + Millis(100));
  EXPECT_EQ(events[2].kind, PlayoutEvent::Kind::kSkipped);
  EXPECT_TRUE(events[2].undecodable);
  EXPECT_EQ(events[3].kind, PlayoutEvent::Kind::kPlayed);
  EXPECT_EQ(buffer.last_decodable_keyframe_seq(), next_key.packets[0].stream_seq);
}

TEST(JitterBufferTest, FramesWithNoPacketsAreSkippedWithTheirCount) {
  JitterBuffer buffer(JitterBufferConfig{});
  FrameSource source;
  FrameFixture f = source.Next(4, true);
  buffer.ExpectFrame(f.expected);
  std::vector<PlayoutEvent> events = buffer.Advance(Seconds(1));
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, PlayoutEvent::Kind::kSkipped);
  EXPECT_EQ(events[0].missing_packets, 4);
}

TEST(JitterBufferTest, DuplicateAndLatePacketsAreClassified) {
  JitterBuffer buffer(JitterBufferConfig{});
  FrameSource source;
  FrameFixture f = source.Next(2, true);
  buffer.ExpectFrame(f.expected);
  EXPECT_EQ(buffer.InsertPacket(f.packets[0], 0, 0), InsertResult::kAccepted);
  EXPECT_EQ(buffer.InsertPacket(f.packets[0], 1, 0), InsertResult::kDuplicate);
  buffer.Advance(Seconds(1));
  EXPECT_EQ(buffer.InsertPacket(f.packets[1], Seconds(1), 0), InsertResult::kLate);
  EXPECT_EQ(buffer.late_packets(), 1u);
}

TEST(JitterBufferTest, KeyframeRequestsAreRateLimited) {
  JitterBufferConfig config;
  config.keyframe_request_interval_us = Millis(200);
  JitterBuffer buffer(config);
  FrameSource source;
  for (int i = 0; i < 20; ++i) buffer.ExpectFrame(source.Next(1, false).expected);
  int requests = 0;
  for (const PlayoutEvent& e : buffer.Advance(Seconds(5))) requests += e.request_keyframe;
  // Skips are decided 50 ms apart over 950 ms: one request per 200 ms.
  EXPECT_EQ(requests, 5);
}

// Property: whatever the arrival order, packets of played frames are released
// to the decoder in sequence order.
TEST(JitterBufferPropertyTest, ReleasesInSequenceOrder) {
  RngStream rng(4, "jb.order");
  JitterBuffer buffer(JitterBufferConfig{});
  FrameSource source;
  std::vector<uint16_t> released;
  buffer.set_on_release([&](uint16_t s) { released.push_back(s); });
  struct Pending {
    SimTime arrival;
    RtpPacket packet;
  };
  std::vector<Pending> arrivals;
  for (int i = 0; i < 400; ++i) {
    FrameFixture f = source.Next(static_cast<int>(rng.UniformInt(1, 8)), i % 50 == 0);
    buffer.ExpectFrame(f.expected);
    for (const RtpPacket& p : f.packets) {
      if (rng.Bernoulli(0.02)) continue;
      arrivals.push_back({f.expected.capture_time + rng.UniformInt(Millis(5), Millis(250)), p});
    }
  }
  std::sort(arrivals.begin(), arrivals.end(),
            [](const Pending& a, const Pending& b) { return a.arrival < b.arrival; });
  for (const Pending& a : arrivals) {
    buffer.Advance(a.arrival);
    buffer.InsertPacket(a.packet, a.arrival, 1000);
  }
  buffer.Advance(Seconds(60));
  ASSERT_FALSE(released.empty());
  EXPECT_EQ(buffer.release_order_violations(), 0u);
  for (size_t i = 1; i < released.size(); ++i) {
    ASSERT_EQ(static_cast<uint16_t>(released[i] - released[i - 1]) < 32768, true);
    ASSERT_NE(released[i], released[i - 1]);
  }
}

TEST(JitterBufferTest, InvalidConfigThrows) {
  JitterBufferConfig config;
  config.max_stall_us = -1;
  EXPECT_THROW(config.Validate(), ConfigError);
  JitterBuffer buffer(JitterBufferConfig{});
  buffer.ExpectFrame({5, 0, 0, 1});
  EXPECT_THROW(buffer.ExpectFrame({5, 0, 0, 1}), SimulationError);
}

// A packet repaired by FEC before the NACK wait expires is never requested.
TEST(ReceiverRepairTest, FecRecoverySuppressesTheNack) {
  FrameSource source;
  FrameFixture f = source.Next(10, false);
  const RtpPacket fec = MakeFecPacket(f.packets, 0, 0);
  FecReceiver fec_receiver;
  NackModule nack(NackConfig{});
  for (const RtpPacket& p : f.packets) {
    if (p.stream_seq == 4) continue;
    nack.OnPacket(p.stream_seq, Millis(1));
    fec_receiver.OnMediaPacket(p);
  }
  EXPECT_TRUE(nack.IsMissing(4));
  for (const RtpPacket& r : fec_receiver.OnFecPacket(fec)) nack.OnPacket(r.stream_seq, Millis(2));
  EXPECT_FALSE(nack.IsMissing(4));
  EXPECT_TRUE(nack.Process(Millis(40)).empty());
  EXPECT_EQ(fec_receiver.recovered(), 1u);
}

}  // namespace
}  // namespace rtcnetlab
