#ifndef RTCNETLAB_SIM_TIME_H_
#define RTCNETLAB_SIM_TIME_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rtcnetlab {

// Simulated time and durations, in integer microseconds since simulation
// start. Floating point is never used for the clock.
using SimTime = int64_t;
using SimDuration = int64_t;

constexpr SimDuration kMicrosPerMilli = 1000;
constexpr SimDuration kMicrosPerSecond = 1000000;

constexpr SimDuration Millis(int64_t ms) { return ms * kMicrosPerMilli; }
constexpr SimDuration Seconds(int64_t s) { return s * kMicrosPerSecond; }
inline double ToMillis(SimDuration us) { return static_cast<double>(us) / 1e3; }
inline double ToSeconds(SimDuration us) { return static_cast<double>(us) / 1e6; }

// Time (µs) needed to serialize `bytes` at `rate_bps`, rounded up.
constexpr SimDuration SerializationTime(int64_t bytes, int64_t rate_bps) {
  return (bytes * 8 * kMicrosPerSecond + rate_bps - 1) / rate_bps;
}

// Invalid user-supplied configuration (bad scenario keys, out-of-range
// parameters, unknown preset names).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Broken simulation invariant: a bug, never an expected outcome.
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_SIM_TIME_H_
