// Command-line front end: run, compare, presets, schema.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtcnetlab/bridge/server.h"
#include "rtcnetlab/metrics/summary.h"
#include "rtcnetlab/scenario/presets.h"
#include "rtcnetlab/session/session.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rtcnetlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

struct RunArgs {
  std::string scenario;
  std::optional<uint64_t> seed;
  std::optional<double> duration_s;
  std::string controller;
  std::optional<int64_t> rate_bps;
  std::string out;
  std::string bridge_listen;
  std::string transport;
  double action_timeout_s = 30.0;
};

void SetUpLogging() {
  auto logger = spdlog::stderr_color_mt("rtcnetlab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("RTCNETLAB_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationError("cannot write " + path.string());
  out << text;
}

// Applies --seed/--duration/--transport/--controller to the loaded scenario
// and returns the controller to use (null: the scenario's own).
std::unique_ptr<RateController> ApplyOverrides(const RunArgs& args, Scenario* s) {
  if (args.seed) s->seed = *args.seed;
  if (args.duration_s) {
    if (!(*args.duration_s > 0)) throw ConfigError("--duration must be positive");
    s->duration_us = std::llround(*args.duration_s * 1e6);
  }
  if (!args.transport.empty()) {
    s->transport = ParseTransportMode(args.transport);
    if (s->transport == TransportMode::kTcp) {
      s->rtx.nack_enabled = false;
      s->receiver.nack.enabled = false;
    }
  }
  const std::string& c = args.controller;
  if (c.empty()) return nullptr;
  if (c == "scripted-aggressive") {
    s->controller.kind = ControllerKind::kScripted;
    s->controller.script = AggressiveScript(*s);
  } else {
    s->controller.kind = ParseControllerKind(c);
    if (s->controller.kind == ControllerKind::kFixed && args.rate_bps) {
      s->controller.fixed_rate_bps = *args.rate_bps;
    }
    if (s->controller.kind == ControllerKind::kScripted && s->controller.script.empty()) {
      throw ConfigError("--controller scripted needs a scenario with controller.script");
    }
  }
  s->Validate();
  return MakeController(*s);
}

// Returns the list of violated invariants.
std::vector<std::string> CheckInvariants(const Session& session, const json& summary) {
  std::vector<std::string> violations;
  if (!summary["conservation"]["conserved"].get<bool>()) {
    violations.push_back("packet conservation identity does not hold");
  }
  if (session.jitter_buffer().release_order_violations() > 0) {
    violations.push_back("jitter buffer released packets out of order");
  }
  const size_t expected_rows = static_cast<size_t>(
      (session.scenario().duration_us + Seconds(1) - 1) / Seconds(1));
  if (session.metrics().Rows().size() != expected_rows) {
    violations.push_back("metrics row count differs from ceil(duration)");
  }
  return violations;
}

void WriteArtifacts(const Session& session, const json& summary, const std::string& out) {
  if (out.empty()) return;
  fs::create_directories(out);
  std::ostringstream csv;
  session.metrics().WriteCsv(csv);
  WriteFile(fs::path(out) / "metrics.csv", csv.str());
  WriteFile(fs::path(out) / "summary.json", summary.dump(2) + "\n");
  json echo = ScenarioToJson(session.scenario());
  echo["controller"]["effective"] = std::string(session.controller().name());
  WriteFile(fs::path(out) / "config.echo.json", echo.dump(2) + "\n");
}

int RunBridge(const RunArgs& args) {
  EpisodeConfig defaults;
  defaults.scenario = args.scenario;
  if (args.seed) defaults.seed = *args.seed;
  defaults.duration_s = args.duration_s;
  BridgeServerOptions options;
  std::tie(options.host, options.port) = ParseListenAddress(args.bridge_listen);
  options.action_timeout =
      std::chrono::milliseconds(std::llround(args.action_timeout_s * 1000.0));
  BridgeServer server(options, defaults);
  const uint16_t port = server.Listen();
  std::cout << "bridge listening on " << options.host << ":" << port << std::endl;
  server.ServeOne([&](const Episode& episode) {
    const json summary = episode.session().Summary();
    WriteArtifacts(episode.session(), summary, args.out);
    spdlog::info("episode {} ended after {} steps", episode.episode_id(),
                 episode.total_steps());
  });
  return kExitOk;
}

int Run(const RunArgs& args) {
  if (!args.bridge_listen.empty() || args.controller == "bridge") {
    if (args.bridge_listen.empty()) throw ConfigError("--controller bridge needs --bridge-listen");
    LoadScenario(args.scenario);  // fail early on unknown scenarios
    return RunBridge(args);
  }
  Scenario scenario = LoadScenario(args.scenario);
  std::unique_ptr<RateController> controller = ApplyOverrides(args, &scenario);
  spdlog::info("running {} (seed {}, {} s)", scenario.name, scenario.seed,
               static_cast<double>(scenario.duration_us) / 1e6);
  Session session(scenario, std::move(controller));
  session.Run();
  const json summary = session.Summary();
  WriteArtifacts(session, summary, args.out);
  std::cout << scenario.name << " controller=" << session.controller().name()
            << " rx_total_mbytes=" << summary["media"]["rx_total_mbytes"]
            << " network_plr=" << summary["loss"]["network_plr"]
            << " playout_plr=" << summary["loss"]["playout_plr"]
            << " mean_rtt_ms=" << summary["rtt"]["mean_ms"] << "\n";
  const std::vector<std::string> violations = CheckInvariants(session, summary);
  for (const std::string& v : violations) std::cerr << "invariant violated: " << v << "\n";
  return violations.empty() ? kExitOk : kExitInvariant;
}

json ReadSummary(const std::string& path_text) {
  fs::path path(path_text);
  if (fs::is_directory(path)) path /= "summary.json";
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

int Compare(const std::string& a, const std::string& b, bool as_json) {
  const json result = CompareSummaries(ReadSummary(a), ReadSummary(b));
  if (as_json) {
    std::cout << result.dump(2) << "\n";
    return kExitOk;
  }
  std::printf("%-26s %14s %14s %14s\n", "field", "a", "b", "delta");
  for (const auto& [field, entry] : result["fields"].items()) {
    std::printf("%-26s %14.4f %14.4f %+14.4f\n", field.c_str(), entry["a"].get<double>(),
                entry["b"].get<double>(), entry["delta"].get<double>());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  SetUpLogging();
  CLI::App app{"rtcnetlab: real-time media transport over impaired 5G links"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", run.scenario, "Preset name or scenario JSON file")
      ->required();
  run_cmd->add_option("--seed", run.seed, "Overrides the scenario seed");
  run_cmd->add_option("--duration", run.duration_s, "Overrides the duration, in seconds");
  run_cmd->add_option("--controller", run.controller, "Rate controller")
      ->check(CLI::IsMember({"gcc", "fixed", "scripted", "scripted-aggressive", "bridge"}));
  run_cmd->add_option("--rate", run.rate_bps, "Rate for --controller fixed, in bps");
  run_cmd->add_option("--out", run.out, "Directory for metrics.csv and summary.json");
  run_cmd->add_option("--bridge-listen", run.bridge_listen,
                      "Serve episodes to an external agent at host:port");
  run_cmd->add_option("--transport", run.transport, "Overrides the transport")
      ->check(CLI::IsMember({"udp", "tcp"}));
  run_cmd->add_option("--action-timeout", run.action_timeout_s,
                      "Bridge action timeout, in seconds");

  std::string cmp_a, cmp_b;
  bool cmp_json = false;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Compare two run summaries");
  cmp_cmd->add_option("a", cmp_a, "summary.json or run directory")->required();
  cmp_cmd->add_option("b", cmp_b, "summary.json or run directory")->required();
  cmp_cmd->add_flag("--json", cmp_json, "Print JSON");

  bool names_only = false;
  CLI::App* presets_cmd = app.add_subcommand("presets", "List preset scenarios");
  presets_cmd->add_flag("--names", names_only, "Print names only");
  CLI::App* schema_cmd = app.add_subcommand("schema", "Print the scenario file schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return Run(run);
    if (*cmp_cmd) return Compare(cmp_a, cmp_b, cmp_json);
    if (*presets_cmd) {
      if (names_only) {
        for (const std::string& name : PresetNames()) std::cout << name << "\n";
      } else {
        std::cout << PresetTable().dump(2) << "\n";
      }
      return kExitOk;
    }
    if (*schema_cmd) {
      std::cout << ScenarioSchema().dump(2) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}
