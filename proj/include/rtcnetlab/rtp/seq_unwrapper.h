#ifndef RTCNETLAB_RTP_SEQ_UNWRAPPER_H_
#define RTCNETLAB_RTP_SEQ_UNWRAPPER_H_

#include <cstdint>
#include <optional>

namespace rtcnetlab {

// Maps wrapping 16-bit sequence numbers onto a monotone 64-bit axis, picking
// the unwrapped value closest to the last one seen.
class SeqUnwrapper {
 public:
  int64_t Unwrap(uint16_t seq) {
    if (!last_) {
      last_ = seq;
      return *last_;
    }
    const int64_t last = *last_;
    const uint16_t last_wrapped = static_cast<uint16_t>(last);
    const int16_t diff = static_cast<int16_t>(static_cast<uint16_t>(seq - last_wrapped));
    const int64_t value = last + diff;
    if (value > last) last_ = value;
    return value;
  }
  // Unwraps without updating the reference point.
  int64_t Peek(uint16_t seq) const {
    if (!last_) return seq;
    const uint16_t last_wrapped = static_cast<uint16_t>(*last_);
    return *last_ + static_cast<int16_t>(static_cast<uint16_t>(seq - last_wrapped));
  }

 private:
  std::optional<int64_t> last_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_RTP_SEQ_UNWRAPPER_H_
