#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "rtcnetlab/scenario/presets.h"

namespace rtcnetlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Result Cli(const std::string& args) {
  const fs::path dir = Scratch("io");
  const std::string command = std::string(RTCNETLAB_CLI_PATH) + " " + args + " >" +
                              (dir / "out").string() + " 2>" + (dir / "err").string();
  const int status = std::system(command.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(dir / "out");
  r.err = Slurp(dir / "err");
  return r;
}

TEST(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("run").code, 2);
  EXPECT_EQ(Cli("run --scenario no_such_scenario").code, 2);
  EXPECT_EQ(Cli("run --scenario easy --duration 0").code, 2);
  EXPECT_EQ(Cli("run --scenario easy --controller warp").code, 2);
  EXPECT_EQ(Cli("run --scenario easy --controller bridge").code, 2);
  EXPECT_EQ(Cli("run --scenario multihome_rev --transport tcp").code, 2);
  EXPECT_EQ(Cli("compare /nonexistent/a /nonexistent/b").code, 2);
  const Result r = Cli("run --scenario no_such_scenario");
  EXPECT_NE(r.err.find("no_such_scenario"), std::string::npos) << r.err;
}

TEST(CliTest, HelpExitsWithZero) { EXPECT_EQ(Cli("--help").code, 0); }

TEST(CliTest, ListsPresetsAndSchema) {
  Result r = Cli("presets --names");
  EXPECT_EQ(r.code, 0);
  std::string expected;
  for (const std::string& name : PresetNames()) expected += name + "\n";
  EXPECT_EQ(r.out, expected);
  r = Cli("presets");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out), PresetTable());
  r = Cli("schema");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["format"], "rtcnetlab-scenario");
}

TEST(CliTest, RunWritesIdenticalArtifactsForTheSameSeed) {
  const fs::path a = Scratch("run_a");
  const fs::path b = Scratch("run_b");
  const std::string args = "run --scenario moderate --duration 5 --seed 3 --out ";
  ASSERT_EQ(Cli(args + a.string()).code, 0);
  ASSERT_EQ(Cli(args + b.string()).code, 0);
  for (const char* file : {"metrics.csv", "summary.json", "config.echo.json"}) {
    ASSERT_TRUE(fs::exists(a / file)) << file;
    EXPECT_EQ(Slurp(a / file), Slurp(b / file)) << file;
  }
  std::istringstream csv(Slurp(a / "metrics.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 1 + 5);
  const json summary = json::parse(Slurp(a / "summary.json"));
  EXPECT_EQ(summary["seed"], 3);
  EXPECT_EQ(summary["scenario"], "moderate");
  const json echo = json::parse(Slurp(a / "config.echo.json"));
  EXPECT_EQ(echo["controller"]["effective"], "gcc");
}

TEST(CliTest, OverridesReachTheRun) {
  const fs::path out = Scratch("override");
  ASSERT_EQ(Cli("run --scenario congested_udp --duration 3 --controller fixed --rate 1500000 "
                "--transport tcp --out " +
                out.string())
                .code,
            0);
  const json summary = json::parse(Slurp(out / "summary.json"));
  EXPECT_EQ(summary["controller"], "fixed");
  EXPECT_EQ(summary["transport"], "tcp");
  EXPECT_DOUBLE_EQ(summary["rate"]["target_mean_mbps"].get<double>(), 1.5);
  ASSERT_EQ(Cli("run --scenario moderate --duration 8 --controller scripted-aggressive --out " +
                out.string())
                .code,
            0);
  EXPECT_EQ(json::parse(Slurp(out / "summary.json"))["controller"], "scripted");
}

TEST(CliTest, RunsScenarioFiles) {
  const fs::path dir = Scratch("file");
  json j = {{"name", "tiny"},
            {"duration_s", 2},
            {"links", json::array({{{"base_capacity_bps", 4'000'000}}})}};
  std::ofstream(dir / "tiny.json") << j.dump();
  const Result r = Cli("run --scenario " + (dir / "tiny.json").string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("tiny controller=gcc", 0), 0u) << r.out;
  j["encoder"] = {{"fps", "fast"}};
  std::ofstream(dir / "bad.json") << j.dump();
  const Result bad = Cli("run --scenario " + (dir / "bad.json").string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("encoder.fps"), std::string::npos) << bad.err;
}

TEST(CliTest, CompareIsAntisymmetric) {
  const fs::path a = Scratch("cmp_a");
  const fs::path b = Scratch("cmp_b");
  ASSERT_EQ(Cli("run --scenario congested_udp --duration 4 --out " + a.string()).code, 0);
  ASSERT_EQ(Cli("run --scenario congested_nack --duration 4 --out " + b.string()).code, 0);
  const Result ab = Cli("compare --json " + a.string() + " " + (b / "summary.json").string());
  const Result ba = Cli("compare --json " + b.string() + " " + a.string());
  ASSERT_EQ(ab.code, 0);
  ASSERT_EQ(ba.code, 0);
  const json x = json::parse(ab.out);
  const json y = json::parse(ba.out);
  EXPECT_EQ(x["a"], "congested_udp");
  for (const auto& [field, entry] : x["fields"].items()) {
    EXPECT_DOUBLE_EQ(entry["delta"].get<double>(), -y["fields"][field]["delta"].get<double>())
        << field;
  }
  const Result table = Cli("compare " + a.string() + " " + b.string());
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("/loss/playout_plr"), std::string::npos);
}

// A port that cannot be bound is a runtime failure, not a usage error.
TEST(CliTest, RuntimeFailuresExitWithOne) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  ASSERT_EQ(::listen(fd, 1), 0);
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  const Result r = Cli("run --scenario easy --bridge-listen 127.0.0.1:" + std::to_string(port));
  ::close(fd);
  EXPECT_EQ(r.code, 1) << r.err;
}

}  // namespace
}  // namespace rtcnetlab
