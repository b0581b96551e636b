#ifndef RTCNETLAB_NET_DATAGRAM_H_
#define RTCNETLAB_NET_DATAGRAM_H_

#include <cstdint>
#include <variant>

#include "rtcnetlab/feedback/messages.h"
#include "rtcnetlab/rtp/rtp_packet.h"

namespace rtcnetlab {

using DatagramContent = std::variant<RtpPacket, SenderReport, ReceiverReport,
                                     TwccFeedback, NackRequest, KeyframeRequest>;

// Anything carried by a link. Timing fields are filled in by the link.
struct Datagram {
  DatagramContent content;
  int64_t size_bytes = 0;
  SimTime sent_time = 0;
  SimTime service_start_time = 0;
  SimTime departure_time = 0;
  // Propagation leg after departure, excluding any handover hold.
  SimDuration propagation_us = 0;
  // Transport-layer tag (TCP segment number); -1 when unused.
  int64_t segment = -1;

  static Datagram Of(DatagramContent content) {
    Datagram d;
    d.size_bytes = std::visit([](const auto& c) { return c.size_bytes(); }, content);
    d.content = std::move(content);
    return d;
  }
  bool is_rtp() const { return std::holds_alternative<RtpPacket>(content); }
};

enum class DropReason : uint8_t { kQueueOverflow, kRandom, kOutOfRange };

}  // namespace rtcnetlab

#endif  // RTCNETLAB_NET_DATAGRAM_H_
