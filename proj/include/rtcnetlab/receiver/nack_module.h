#ifndef RTCNETLAB_RECEIVER_NACK_MODULE_H_
#define RTCNETLAB_RECEIVER_NACK_MODULE_H_

#include <cstdint>
#include <map>
#include <vector>

#include "rtcnetlab/rtp/seq_unwrapper.h"
#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

struct NackConfig {
  bool enabled = true;
  // Minimum spacing between requests for one packet; a newly detected gap
  // also waits this long before its first request, which absorbs reordering.
  SimDuration interval_us = Millis(20);
  int max_requests = 10;
  size_t max_list_size = 1000;
  int64_t max_seq_age = 10000;

  void Validate() const;
};

// Observed extremes, kept so tests can assert the gates held.
struct NackGateStats {
  uint64_t requests_sent = 0;
  int max_requests_for_one_seq = 0;
  SimDuration min_spacing_us = INT64_MAX;
  size_t max_list_size = 0;
  uint64_t evicted_list_full = 0;
  uint64_t evicted_too_old = 0;
  uint64_t expired_max_requests = 0;
};

// Receiver missing-list bookkeeping. Gaps in the media sequence space become
// entries; each entry is re-requested at most max_requests times, no more
// often than interval_us. The list is bounded both in size and in sequence
// distance from the newest packet, and is cleared up to any later keyframe
// that became decodable.
class NackModule {
 public:
  explicit NackModule(const NackConfig& config);

  // Returns false for a duplicate (already received) sequence number.
  bool OnPacket(uint16_t seq, SimTime now);
  // Sequence numbers to request now.
  std::vector<uint16_t> Process(SimTime now);
  // Drops entries older than `seq` (a decodable keyframe starts there).
  void OnDecodableKeyframe(uint16_t first_seq);
  // Drops entries at or before `seq` (their frames were already decided).
  void ClearUpTo(uint16_t seq);

  size_t missing_count() const { return missing_.size(); }
  bool IsMissing(uint16_t seq) const;
  const NackGateStats& stats() const { return stats_; }

 private:
  struct Entry {
    SimTime first_seen = 0;
    int requests = 0;
    SimTime last_request = 0;
  };

  void EnforceLimits();

  NackConfig config_;
  SeqUnwrapper unwrapper_;
  int64_t newest_ = -1;
  std::map<int64_t, Entry> missing_;
  NackGateStats stats_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RECEIVER_NACK_MODULE_H_
