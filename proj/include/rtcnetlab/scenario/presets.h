#ifndef RTCNETLAB_SCENARIO_PRESETS_H_
#define RTCNETLAB_SCENARIO_PRESETS_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "rtcnetlab/scenario/scenario.h"

namespace rtcnetlab {

std::vector<std::string> PresetNames();
bool IsPresetName(const std::string& name);
// Throws ConfigError for an unknown name.
Scenario Preset(const std::string& name);

// Every preset's full parameter set plus the paired comparison groups.
nlohmann::json PresetTable();

// Expected mean usable capacity of a link outside congestion episodes:
// base capacity minus the mean background load.
int64_t NominalCapacityBps(const LinkProfile& link);

// The "scripted-aggressive" baseline: start rate for five seconds, then a
// constant rate at 80% of the first link's nominal capacity (clamped to the
// encoder bounds), blind to feedback.
ScriptedController::Table AggressiveScript(const Scenario& scenario);

}  // namespace rtcnetlab

#endif  // RTCNETLAB_SCENARIO_PRESETS_H_
