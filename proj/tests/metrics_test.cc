#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "rtcnetlab/metrics/metrics.h"
#include "rtcnetlab/metrics/summary.h"
#include "rtcnetlab/sim/random.h"

namespace rtcnetlab {
namespace {

using nlohmann::json;

RtpPacket Media(int64_t payload) {
  RtpPacket p;
  p.payload_size = payload;
  return p;
}

PlayoutEvent Played(SimTime at, std::vector<PacketArrival> packets) {
  PlayoutEvent e;
  e.kind = PlayoutEvent::Kind::kPlayed;
  e.decided_at = at;
  e.packet_count = static_cast<int>(packets.size());
  e.packets = std::move(packets);
  e.latency.queuing = Millis(10);
  return e;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

TEST(MetricsTest, CsvHasOneRowPerTickAndTheDocumentedHeader) {
  MetricsCollector m;
  for (int i = 1; i <= 3; ++i) m.Tick(Seconds(i), 40.0, 1'000'000);
  std::ostringstream out;
  m.WriteCsv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "t_s,rx_rate_mbps,rx_total_mbytes,rtt_ms,plr_window_pct,plr_global_pct,"
            "rtx_rate_global_pct,goodput_mbps,target_bitrate_mbps,frames_played,"
            "frames_skipped,stall_ms,latency_processing_ms,latency_queuing_ms,"
            "latency_transmission_ms,latency_decoding_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(Split(line).size(), 16u);
  }
  EXPECT_EQ(rows, 3);
}

TEST(MetricsTest, WindowsFileEventsWhereTheyHappened) {
  MetricsCollector m;
  // Window 0: two sends, one dropped. Window 1: one send, delivered late.
  m.OnNetSent(Millis(100));
  m.OnNetSent(Millis(200));
  m.OnNetDropped(Millis(200));
  m.OnNetSent(Millis(1500));
  m.OnRtpSent(Media(1000), Millis(100));
  RtpPacket rtx = Media(1000);
  rtx.is_retransmission = true;
  m.OnRtpSent(rtx, Millis(300));
  m.OnRtpDelivered(Media(988), Millis(1700));
  m.OnPlayout(Played(Millis(1900), {{Millis(900), 500}, {Millis(1700), 988}}));
  m.Tick(Seconds(1), 30.0, 2'000'000);
  m.Tick(Seconds(2), 35.0, 2'500'000);
  const std::vector<MetricsRow> rows = m.Rows();
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].plr_window_pct, 50.0);
  EXPECT_DOUBLE_EQ(rows[1].plr_window_pct, 0.0);
  EXPECT_NEAR(rows[1].plr_global_pct, 100.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(rows[0].rtx_rate_global_pct, 100.0);
  EXPECT_DOUBLE_EQ(rows[0].rx_rate_mbps, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].rx_rate_mbps, Media(988).size_bytes() * 8 / 1e6);
  // Goodput lands in the window each payload arrived in.
  EXPECT_DOUBLE_EQ(rows[0].goodput_mbps, 500 * 8 / 1e6);
  EXPECT_DOUBLE_EQ(rows[1].goodput_mbps, 988 * 8 / 1e6);
  EXPECT_EQ(rows[1].frames_played, 1u);
  EXPECT_DOUBLE_EQ(rows[1].latency_queuing_ms, 10.0);
  EXPECT_DOUBLE_EQ(rows[1].target_bitrate_mbps, 2.5);
  EXPECT_EQ(m.goodput_total_bytes(), 1488);
}

TEST(MetricsTest, SkippedFramesCountMissingPackets) {
  MetricsCollector m;
  PlayoutEvent skip;
  skip.kind = PlayoutEvent::Kind::kSkipped;
  skip.decided_at = Millis(500);
  skip.packet_count = 4;
  skip.missing_packets = 1;
  skip.stall_us = Millis(100);
  skip.undecodable = true;
  m.OnPlayout(skip);
  m.Tick(Seconds(1), 0, 0);
  EXPECT_EQ(m.frames_skipped(), 1u);
  EXPECT_EQ(m.frames_undecodable(), 1u);
  EXPECT_EQ(m.playout_missing(), 1);
  EXPECT_EQ(m.goodput_total_bytes(), 0);
  EXPECT_DOUBLE_EQ(m.Rows()[0].stall_ms, 100.0);
}

TEST(MetricsTest, PartialFinalWindowUsesItsOwnLength) {
  MetricsCollector m;
  m.OnRtpDelivered(Media(988), Millis(1200));
  m.Tick(Seconds(1), 0, 0);
  m.Tick(Millis(1500), 0, 0);
  const std::vector<MetricsRow> rows = m.Rows();
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[1].rx_rate_mbps, Media(988).size_bytes() * 8 / 0.5 / 1e6);
}

TEST(MetricsTest, RejectsNonPositiveWindow) {
  EXPECT_THROW(MetricsCollector(0), ConfigError);
}

TEST(SummaryTest, QuantileIsNearestRank) {
  EXPECT_EQ(Quantile({}, 0.5), 0.0);
  EXPECT_EQ(Quantile({3, 1, 2}, 0.0), 1.0);
  EXPECT_EQ(Quantile({3, 1, 2}, 0.5), 2.0);
  EXPECT_EQ(Quantile({3, 1, 2}, 1.0), 3.0);
  std::vector<double> hundred;
  for (int i = 1; i <= 100; ++i) hundred.push_back(i);
  EXPECT_EQ(Quantile(hundred, 0.95), 95.0);
}

TEST(SummaryTest, PlrBands) {
  EXPECT_EQ(PlrBand(0.005), "below");
  EXPECT_EQ(PlrBand(0.01), "within");
  EXPECT_EQ(PlrBand(0.03), "within");
  EXPECT_EQ(PlrBand(0.031), "above");
}

json RandomSummary(RngStream* rng, const std::string& name) {
  json s = {{"scenario", name}};
  for (const std::string& field : ComparedFields()) {
    s[json::json_pointer(field)] = rng->Uniform(0.0, 10.0);
  }
  return s;
}

// Swapping the arguments negates every delta and inverts every ratio.
TEST(SummaryPropertyTest, CompareIsAntisymmetric) {
  RngStream rng(5, "compare");
  for (int trial = 0; trial < 200; ++trial) {
    const json a = RandomSummary(&rng, "a");
    const json b = RandomSummary(&rng, "b");
    const json ab = CompareSummaries(a, b);
    const json ba = CompareSummaries(b, a);
    EXPECT_EQ(ab["a"], "a");
    EXPECT_EQ(ba["a"], "b");
    ASSERT_EQ(ab["fields"].size(), ComparedFields().size());
    for (const std::string& field : ComparedFields()) {
      const json& x = ab["fields"][field];
      const json& y = ba["fields"][field];
      EXPECT_DOUBLE_EQ(x["delta"].get<double>(), -y["delta"].get<double>());
      EXPECT_NEAR(x["ratio"].get<double>() * y["ratio"].get<double>(), 1.0, 1e-12);
    }
  }
}

TEST(SummaryTest, CompareSkipsMissingFieldsAndZeroRatios) {
  json a = {{"scenario", "a"}, {"stall_ms", 0.0}};
  json b = {{"scenario", "b"}, {"stall_ms", 5.0}};
  const json c = CompareSummaries(a, b);
  ASSERT_EQ(c["fields"].size(), 1u);
  EXPECT_TRUE(c["fields"]["/stall_ms"]["ratio"].is_null());
  EXPECT_DOUBLE_EQ(c["fields"]["/stall_ms"]["delta"].get<double>(), 5.0);
}

}  // namespace
}  // namespace rtcnetlab
