#include "rtcnetlab/net/multihome.h"

namespace rtcnetlab {

MultiHomeSplitter::MultiHomeSplitter(std::vector<Link*> links, double ratio)
    : links_(std::move(links)), ratio_(ratio), assigned_(links_.size(), 0) {
  if (links_.size() != 2) throw ConfigError("multi-homing needs exactly two links");
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw ConfigError("multihome split ratio must lie in [0, 1]");
  }
}

std::optional<size_t> MultiHomeSplitter::Choose(SimTime now) {
  const bool first_up = links_[0]->Available(now);
  const bool second_up = links_[1]->Available(now);
  std::optional<size_t> choice;
  if (first_up && second_up) {
    credit_ += ratio_;
    if (credit_ >= 1.0 - 1e-12) {
      credit_ -= 1.0;
      choice = 0;
    } else {
      choice = 1;
    }
  } else if (first_up) {
    choice = 0;
  } else if (second_up) {
    choice = 1;
  }
  if (choice) ++assigned_[*choice];
  return choice;
}

TransmitOutcome MultiHomeSplitter::Transmit(Datagram datagram, SimTime now) {
  const auto choice = Choose(now);
  if (!choice) {
    links_[0]->RecordUnroutable(datagram);
    return {false, DropReason::kOutOfRange};
  }
  return links_[*choice]->Transmit(std::move(datagram), now);
}

}  // namespace rtcnetlab
