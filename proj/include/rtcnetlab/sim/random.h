#ifndef RTCNETLAB_SIM_RANDOM_H_
#define RTCNETLAB_SIM_RANDOM_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace rtcnetlab {

// One independent, reproducible random sequence per stochastic process.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here rather than taken from
// <random>, because the standard library's distribution algorithms differ
// between implementations. The generator seed is
// splitmix64(seed ^ fnv1a64(stream_id)), so adding a stream never shifts the
// draws of another.
class RngStream {
 public:
  RngStream(uint64_t seed, std::string_view stream_id);

  uint64_t seed() const { return seed_; }
  const std::string& stream_id() const { return stream_id_; }

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double NextUnit();
  // Uniform in [a, b). Throws ConfigError when a > b.
  double Uniform(double a, double b);
  // Uniform integer in [a, b], unbiased. Throws ConfigError when a > b.
  int64_t UniformInt(int64_t a, int64_t b);
  // Throws ConfigError when mean <= 0.
  double Exponential(double mean);
  // Throws ConfigError when p is outside [0, 1].
  bool Bernoulli(double p);

 private:
  uint64_t seed_;
  std::string stream_id_;
  std::mt19937_64 engine_;
};

uint64_t Fnv1a64(std::string_view text);
uint64_t SplitMix64(uint64_t x);

}  // namespace rtcnetlab

#endif  // RTCNETLAB_SIM_RANDOM_H_
