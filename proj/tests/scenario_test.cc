#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "rtcnetlab/scenario/presets.h"
#include "rtcnetlab/scenario/scenario.h"

namespace rtcnetlab {
namespace {

using nlohmann::json;

// Paths (a.b.c) whose values differ between two JSON documents.
void Diff(const json& a, const json& b, const std::string& path, std::set<std::string>* out) {
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (auto it = a.begin(); it != a.end(); ++it) keys.insert(it.key());
    for (auto it = b.begin(); it != b.end(); ++it) keys.insert(it.key());
    for (const std::string& k : keys) {
      const std::string sub = path.empty() ? k : path + "." + k;
      if (!a.contains(k) || !b.contains(k)) {
        out->insert(sub);
      } else {
        Diff(a[k], b[k], sub, out);
      }
    }
    return;
  }
  if (a != b) out->insert(path);
}

std::set<std::string> PresetDiff(const std::string& a, const std::string& b) {
  std::set<std::string> out;
  Diff(ScenarioToJson(Preset(a)), ScenarioToJson(Preset(b)), "", &out);
  out.erase("name");
  out.erase("description");
  return out;
}

json Minimal() {
  return {{"links", json::array({{{"base_capacity_bps", 5'000'000}}})}};
}

std::string ErrorOf(const json& j) {
  try {
    ScenarioFromJson(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ScenarioTest, EveryPresetValidatesAndRoundTrips) {
  for (const std::string& name : PresetNames()) {
    const Scenario s = Preset(name);
    EXPECT_EQ(s.name, name);
    EXPECT_FALSE(s.description.empty()) << name;
    const json once = ScenarioToJson(s);
    const json twice = ScenarioToJson(ScenarioFromJson(once));
    EXPECT_EQ(once, twice) << name;
  }
}

TEST(ScenarioTest, MinimalFileTakesDefaults) {
  const Scenario s = ScenarioFromJson(Minimal());
  EXPECT_EQ(s.duration_us, Seconds(60));
  EXPECT_EQ(s.transport, TransportMode::kUdp);
  EXPECT_EQ(s.encoder.fps, 20);
  EXPECT_EQ(s.rtp.mtu, 1250);
  ASSERT_EQ(s.links.size(), 1u);
  EXPECT_EQ(s.links[0].base_capacity_bps, 5'000'000);
  const LinkProfile reverse = s.ResolvedReverseLink();
  EXPECT_EQ(reverse.base_capacity_bps, 15'000'000);
  EXPECT_EQ(reverse.base_delay_us, s.links[0].base_delay_us);
}

TEST(ScenarioTest, UnknownKeysAreRejectedWithTheirPath) {
  json j = Minimal();
  j["encoder"] = {{"fpz", 30}};
  EXPECT_NE(ErrorOf(j).find("encoder.fpz"), std::string::npos) << ErrorOf(j);
  j = Minimal();
  j["links"][0]["events"] = json::array({{{"kind", "congestion"}, {"strat_ms", 5}}});
  EXPECT_NE(ErrorOf(j).find("links[0].events[0].strat_ms"), std::string::npos) << ErrorOf(j);
  j = Minimal();
  j["surprise"] = true;
  EXPECT_NE(ErrorOf(j).find("surprise"), std::string::npos);
}

TEST(ScenarioTest, TypeMismatchesNameTheKey) {
  json j = Minimal();
  j["seed"] = "seven";
  EXPECT_NE(ErrorOf(j).find("seed"), std::string::npos);
  j = Minimal();
  j["encoder"] = {{"fps", 29.97}};
  EXPECT_NE(ErrorOf(j).find("encoder.fps"), std::string::npos);
  j = Minimal();
  j["reliability"] = {{"nack_enabled", 1}};
  EXPECT_NE(ErrorOf(j).find("reliability.nack_enabled"), std::string::npos);
}

TEST(ScenarioTest, InvalidCombinationsAreRejected) {
  json j = Minimal();
  j["transport"] = "quic";
  EXPECT_NE(ErrorOf(j), "");
  j = Minimal();
  j["links"].push_back({{"base_capacity_bps", 5'000'000}});
  j["transport"] = "tcp";
  EXPECT_NE(ErrorOf(j).find("multi-homing"), std::string::npos);
  j = Minimal();
  j["links"] = json::array();
  EXPECT_NE(ErrorOf(j), "");
  j = Minimal();
  j["multihome_ratio"] = 1.0;
  EXPECT_NE(ErrorOf(j), "");
  j = Minimal();
  j["controller"] = {{"start_rate_bps", 100}};
  EXPECT_NE(ErrorOf(j), "");
  j = Minimal();
  j["duration_s"] = 0;
  EXPECT_NE(ErrorOf(j), "");
}

TEST(ScenarioTest, LoadsPresetsAndFiles) {
  EXPECT_EQ(LoadScenario("easy").name, "easy");
  EXPECT_THROW(LoadScenario("no_such_preset_or_file"), ConfigError);
  const std::string path = ::testing::TempDir() + "/scenario_test.json";
  {
    std::ofstream out(path);
    json j = Minimal();
    j["name"] = "from_file";
    j["seed"] = 9;
    out << j.dump();
  }
  const Scenario s = LoadScenario(path);
  EXPECT_EQ(s.name, "from_file");
  EXPECT_EQ(s.seed, 9u);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(LoadScenario(path), ConfigError);
  std::remove(path.c_str());
}

TEST(ScenarioTest, SchemaDefaultsParseBack) {
  const json schema = ScenarioSchema();
  EXPECT_EQ(schema["format"], "rtcnetlab-scenario");
  EXPECT_TRUE(schema["fields"].contains("encoder"));
  EXPECT_TRUE(schema["fields"]["links"][0].contains("event_processes"));
  const Scenario s = ScenarioFromJson(schema["defaults"]);
  EXPECT_EQ(ScenarioToJson(s), schema["defaults"]);
}

// Every key in the schema's defaults is accepted by the parser, and every
// documented field has a default.
TEST(ScenarioTest, SchemaFieldsMatchTheParser) {
  const json schema = ScenarioSchema();
  const json& fields = schema["fields"];
  const json& defaults = schema["defaults"];
  for (auto it = fields.begin(); it != fields.end(); ++it) {
    EXPECT_TRUE(defaults.contains(it.key())) << it.key();
    if (it->is_object() && it.key() != "links") {
      for (auto sub = it->begin(); sub != it->end(); ++sub) {
        EXPECT_TRUE(defaults[it.key()].contains(sub.key())) << it.key() << "." << sub.key();
      }
    }
  }
}

TEST(PresetTest, PairedPresetsDifferOnlyInTheirKnob) {
  EXPECT_EQ(PresetDiff("congested_udp", "congested_tcp"), (std::set<std::string>{"transport"}));
  // TCP retransmits on its own, so the TCP variant also turns NACK off.
  EXPECT_EQ(PresetDiff("easy_udp", "easy_tcp"),
            (std::set<std::string>{"reliability.nack_enabled", "transport"}));
  EXPECT_EQ(PresetDiff("congested_udp", "congested_nack"),
            (std::set<std::string>{"reliability.nack_enabled"}));
  EXPECT_EQ(PresetDiff("congested_nack", "congested_nack_fec"),
            (std::set<std::string>{"reliability.fec_enabled"}));
  const std::set<std::string> hnack = PresetDiff("congested_nack", "congested_hnack");
  EXPECT_EQ(hnack, (std::set<std::string>{"receiver.nack_interval_ms", "receiver.nack_max_count",
                                          "reliability.rtx_max_count"}));
}

TEST(PresetTest, CongestedPresetsShareTheirLink) {
  const Scenario s = Preset("congested_udp");
  EXPECT_EQ(s.controller.kind, ControllerKind::kFixed);
  EXPECT_EQ(s.controller.fixed_rate_bps, 2'000'000);
  EXPECT_EQ(s.duration_us, Seconds(120));
  ASSERT_EQ(s.links.size(), 1u);
  EXPECT_FALSE(s.rtx.nack_enabled);
  EXPECT_FALSE(s.fec.enabled);
}

TEST(PresetTest, MultihomePresetsHaveTwoLinks) {
  EXPECT_EQ(Preset("multihome_rev").links.size(), 2u);
  EXPECT_EQ(Preset("multihome_unequal").links.size(), 2u);
}

TEST(PresetTest, ComparisonGroupsNameExistingPresets) {
  const json table = PresetTable();
  EXPECT_EQ(table["presets"].size(), PresetNames().size());
  for (auto it = table["comparison_groups"].begin(); it != table["comparison_groups"].end();
       ++it) {
    for (const json& name : *it) EXPECT_TRUE(IsPresetName(name.get<std::string>())) << name;
  }
  EXPECT_THROW(Preset("nope"), ConfigError);
}

TEST(PresetTest, NominalCapacitySubtractsMeanBackground) {
  LinkProfile link;
  link.base_capacity_bps = 20'000'000;
  EXPECT_EQ(NominalCapacityBps(link), 20'000'000);
  BackgroundLoadConfig bg;  // 15 units x 0.9 Mbps on average
  link.background = bg;
  EXPECT_EQ(NominalCapacityBps(link), 6'500'000);
  bg.share = 10.0;
  link.background = bg;
  EXPECT_EQ(NominalCapacityBps(link), 1'000'000);
}

TEST(PresetTest, AggressiveScriptJumpsAfterFiveSeconds) {
  const Scenario s = Preset("moderate");
  const ScriptedController::Table script = AggressiveScript(s);
  ASSERT_EQ(script.size(), 2u);
  EXPECT_EQ(script[0].second, s.controller.start_rate_bps);
  EXPECT_EQ(script[1].first, Seconds(5));
  EXPECT_EQ(script[1].second,
            ClampBitrate(0.8 * static_cast<double>(NominalCapacityBps(s.links[0]))));
}

}  // namespace
}  // namespace rtcnetlab
