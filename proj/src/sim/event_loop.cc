#include "rtcnetlab/sim/event_loop.h"

#include <exception>
#include <string>

namespace rtcnetlab {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kGeneric: return "generic";
    case EventKind::kFrameCapture: return "frame_capture";
    case EventKind::kFrameEncoded: return "frame_encoded";
    case EventKind::kPacerRelease: return "pacer_release";
    case EventKind::kLinkDeparture: return "link_departure";
    case EventKind::kLinkDelivery: return "link_delivery";
    case EventKind::kLinkEvent: return "link_event";
    case EventKind::kTcpTimeout: return "tcp_timeout";
    case EventKind::kFeedbackDelivery: return "feedback_delivery";
    case EventKind::kReceiverTick: return "receiver_tick";
    case EventKind::kPlayout: return "playout";
    case EventKind::kReport: return "report";
    case EventKind::kMetricsTick: return "metrics_tick";
    case EventKind::kControl: return "control";
  }
  return "unknown";
}

EventHandle EventLoop::Schedule(SimTime fire_time, EventKind kind,
                                Handler handler, uint32_t target) {
  if (fire_time < now_) {
    throw SimulationError("event '" + std::string(EventKindName(kind)) +
                          "' scheduled at " + std::to_string(fire_time) +
                          "us, before current time " + std::to_string(now_) +
                          "us");
  }
  const uint64_t index = next_index_++;
  queue_.push(Event{fire_time, index, kind, target, std::move(handler)});
  return EventHandle{index};
}

void EventLoop::Cancel(EventHandle handle) {
  if (handle.valid() && handle.id < next_index_) cancelled_.insert(handle.id);
}

RunSummary EventLoop::RunUntil(SimTime end) {
  if (end < now_) {
    throw SimulationError("RunUntil(" + std::to_string(end) +
                          ") before current time " + std::to_string(now_));
  }
  while (!queue_.empty() && queue_.top().fire_time <= end) {
    // priority_queue::top is const; the event is popped before it runs so
    // handlers may schedule freely.
    Event event = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    if (auto it = cancelled_.find(event.insertion_index);
        it != cancelled_.end()) {
      cancelled_.erase(it);
      continue;
    }
    now_ = event.fire_time;
    ++events_processed_;
    try {
      event.handler();
    } catch (const std::exception& e) {
      throw SimulationError("handler for event '" +
                            std::string(EventKindName(event.kind)) + "' at " +
                            std::to_string(event.fire_time) +
                            "us failed: " + e.what());
    }
  }
  now_ = end;
  return RunSummary{now_, events_processed_};
}

}  // namespace rtcnetlab
