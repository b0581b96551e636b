#ifndef RTCNETLAB_FEEDBACK_FEEDBACK_CHANNEL_H_
#define RTCNETLAB_FEEDBACK_FEEDBACK_CHANNEL_H_

#include <cstdint>
#include <functional>

#include "rtcnetlab/net/datagram.h"
#include "rtcnetlab/sim/event_loop.h"

namespace rtcnetlab {

struct FeedbackConfig {
  SimDuration rr_period_us = Seconds(1);
  SimDuration twcc_period_us = Millis(100);
  // Feedback reaches the sender instantly and is never lost.
  bool no_cost = false;

  void Validate() const;
};

// Receiver-to-sender control path. In no-cost mode a message is delivered
// at its send time through the event loop; otherwise it is handed to the
// reverse network path. Feedback bypasses the pacer either way.
class FeedbackChannel {
 public:
  using SendFn = std::function<void(Datagram, SimTime now)>;
  using DeliverFn = std::function<void(Datagram, SimTime arrival)>;

  FeedbackChannel(EventLoop* loop, bool no_cost, SendFn network_send, DeliverFn deliver);

  void Send(Datagram datagram, SimTime now);
  bool no_cost() const { return no_cost_; }
  uint64_t sent() const { return sent_; }
  int64_t sent_bytes() const { return sent_bytes_; }

 private:
  EventLoop* loop_;
  bool no_cost_;
  SendFn network_send_;
  DeliverFn deliver_;
  uint64_t sent_ = 0;
  int64_t sent_bytes_ = 0;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_FEEDBACK_FEEDBACK_CHANNEL_H_
