#include "rtcnetlab/feedback/feedback_channel.h"

#include <utility>

namespace rtcnetlab {

void FeedbackConfig::Validate() const {
  if (rr_period_us <= 0) throw ConfigError("feedback.rr_period_ms must be > 0");
  if (twcc_period_us <= 0) throw ConfigError("feedback.twcc_period_ms must be > 0");
}

FeedbackChannel::FeedbackChannel(EventLoop* loop, bool no_cost, SendFn network_send,
                                 DeliverFn deliver)
    : loop_(loop),
      no_cost_(no_cost),
      network_send_(std::move(network_send)),
      deliver_(std::move(deliver)) {}

void FeedbackChannel::Send(Datagram datagram, SimTime now) {
  ++sent_;
  sent_bytes_ += datagram.size_bytes;
  datagram.sent_time = now;
  if (!no_cost_) {
    network_send_(std::move(datagram), now);
    return;
  }
  loop_->Schedule(
      now, EventKind::kFeedbackDelivery,
      [this, d = std::move(datagram), now]() mutable { deliver_(std::move(d), now); });
}

}  // namespace rtcnetlab
