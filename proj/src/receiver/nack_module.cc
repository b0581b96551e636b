#include "rtcnetlab/receiver/nack_module.h"

#include <algorithm>

namespace rtcnetlab {

void NackConfig::Validate() const {
  if (interval_us <= 0) throw ConfigError("receiver.nack_interval_ms must be > 0");
  if (max_requests < 0) throw ConfigError("receiver.nack_max_count must be >= 0");
  if (max_list_size == 0) throw ConfigError("NACK list size must be > 0");
  if (max_seq_age <= 0 || max_seq_age >= 32768) {
    throw ConfigError("NACK sequence age must lie in (0, 32768)");
  }
}

NackModule::NackModule(const NackConfig& config) : config_(config) {
  config_.Validate();
}

bool NackModule::OnPacket(uint16_t seq, SimTime now) {
  const int64_t key = unwrapper_.Unwrap(seq);
  if (newest_ < 0) {
    newest_ = key;
    return true;
  }
  if (key > newest_) {
    for (int64_t missing = newest_ + 1; missing < key; ++missing) {
      missing_.emplace(missing, Entry{now, 0, 0});
    }
    newest_ = key;
    EnforceLimits();
    return true;
  }
  return missing_.erase(key) > 0;
}

void NackModule::EnforceLimits() {
  while (!missing_.empty() && newest_ - missing_.begin()->first > config_.max_seq_age) {
    missing_.erase(missing_.begin());
    ++stats_.evicted_too_old;
  }
  while (missing_.size() > config_.max_list_size) {
    missing_.erase(missing_.begin());
    ++stats_.evicted_list_full;
  }
  stats_.max_list_size = std::max(stats_.max_list_size, missing_.size());
}

std::vector<uint16_t> NackModule::Process(SimTime now) {
  std::vector<uint16_t> out;
  if (!config_.enabled) return out;
  for (auto it = missing_.begin(); it != missing_.end();) {
    Entry& entry = it->second;
    if (entry.requests >= config_.max_requests) {
      ++stats_.expired_max_requests;
      it = missing_.erase(it);
      continue;
    }
    const bool waited = now - entry.first_seen >= config_.interval_us;
    const bool spaced =
        entry.requests == 0 || now - entry.last_request >= config_.interval_us;
    if (waited && spaced) {
      if (entry.requests > 0) {
        stats_.min_spacing_us =
            std::min(stats_.min_spacing_us, now - entry.last_request);
      }
      ++entry.requests;
      entry.last_request = now;
      stats_.max_requests_for_one_seq =
          std::max(stats_.max_requests_for_one_seq, entry.requests);
      ++stats_.requests_sent;
      out.push_back(static_cast<uint16_t>(it->first));
    }
    ++it;
  }
  return out;
}

void NackModule::OnDecodableKeyframe(uint16_t first_seq) {
  const int64_t key = unwrapper_.Peek(first_seq);
  missing_.erase(missing_.begin(), missing_.lower_bound(key));
}

void NackModule::ClearUpTo(uint16_t seq) {
  const int64_t key = unwrapper_.Peek(seq);
  missing_.erase(missing_.begin(), missing_.upper_bound(key));
}

bool NackModule::IsMissing(uint16_t seq) const {
  return missing_.count(unwrapper_.Peek(seq)) > 0;
}

}  // namespace rtcnetlab
