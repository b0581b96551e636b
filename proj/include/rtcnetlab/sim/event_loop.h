#ifndef RTCNETLAB_SIM_EVENT_LOOP_H_
#define RTCNETLAB_SIM_EVENT_LOOP_H_

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rtcnetlab/sim/time.h"

namespace rtcnetlab {

enum class EventKind : uint8_t {
  kGeneric,
  kFrameCapture,
  kFrameEncoded,
  kPacerRelease,
  kLinkDeparture,
  kLinkDelivery,
  kLinkEvent,
  kTcpTimeout,
  kFeedbackDelivery,
  kReceiverTick,
  kPlayout,
  kReport,
  kMetricsTick,
  kControl,
};

std::string_view EventKindName(EventKind kind);

struct EventHandle {
  uint64_t id = 0;
  bool valid() const { return id != 0; }
};

struct RunSummary {
  SimTime end_time = 0;
  uint64_t events_processed = 0;
};

// Single-threaded discrete-event engine. Events firing at the same time are
// delivered in insertion order. The object can be moved to another thread
// between runs but is never used from two threads at once.
class EventLoop {
 public:
  using Handler = std::function<void()>;

  EventLoop() = default;
  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;
  EventLoop(EventLoop&&) = default;
  EventLoop& operator=(EventLoop&&) = default;

  SimTime now() const { return now_; }

  // Throws SimulationError when `fire_time` lies in the past.
  EventHandle Schedule(SimTime fire_time, EventKind kind, Handler handler,
                       uint32_t target = 0);
  EventHandle ScheduleAfter(SimDuration delay, EventKind kind, Handler handler,
                            uint32_t target = 0) {
    return Schedule(now_ + delay, kind, std::move(handler), target);
  }
  void Cancel(EventHandle handle);

  // Processes every event with fire_time <= end, then sets the clock to end.
  // A throwing handler aborts the run with a SimulationError naming the
  // event kind and time.
  RunSummary RunUntil(SimTime end);

  size_t pending() const { return queue_.size() - cancelled_.size(); }
  uint64_t events_processed() const { return events_processed_; }

 private:
  struct Event {
    SimTime fire_time;
    uint64_t insertion_index;
    EventKind kind;
    uint32_t target;
    Handler handler;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.insertion_index > b.insertion_index;
    }
  };

  SimTime now_ = 0;
  uint64_t next_index_ = 1;
  uint64_t events_processed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<uint64_t> cancelled_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_SIM_EVENT_LOOP_H_
