#include "rtcnetlab/sim/random.h"

#include <cmath>
#include <limits>

#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

uint64_t Fnv1a64(std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(uint64_t seed, std::string_view stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(SplitMix64(seed ^ Fnv1a64(stream_id))) {}

double RngStream::NextUnit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::Uniform(double a, double b) {
  if (!(a <= b)) throw ConfigError("uniform(a, b) requires a <= b");
  return a + (b - a) * NextUnit();
}

int64_t RngStream::UniformInt(int64_t a, int64_t b) {
  if (a > b) throw ConfigError("integer-uniform(a, b) requires a <= b");
  const uint64_t span = static_cast<uint64_t>(b) - static_cast<uint64_t>(a);
  if (span == std::numeric_limits<uint64_t>::max()) {
    return static_cast<int64_t>(engine_());
  }
  const uint64_t range = span + 1;
  // Rejection sampling over the largest multiple of `range`.
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      (std::numeric_limits<uint64_t>::max() % range + 1) % range;
  uint64_t draw;
  do {
    draw = engine_();
  } while (draw > limit);
  return static_cast<int64_t>(static_cast<uint64_t>(a) + draw % range);
}

double RngStream::Exponential(double mean) {
  if (!(mean > 0)) throw ConfigError("exponential(mean) requires mean > 0");
  return -mean * std::log1p(-NextUnit());
}

bool RngStream::Bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("bernoulli(p) requires p in [0, 1]");
  }
  if (p == 0.0) return false;
  if (p == 1.0) return true;
  return NextUnit() < p;
}

}  // namespace rtcnetlab
