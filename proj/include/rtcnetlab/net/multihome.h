#ifndef RTCNETLAB_NET_MULTIHOME_H_
#define RTCNETLAB_NET_MULTIHOME_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "rtcnetlab/net/link.h"

namespace rtcnetlab {

// Splits traffic across two links by deterministic alternation: a credit
// accumulator sends `ratio` of packets over the first link and the rest over
// the second. When one link is unavailable everything goes to the other.
class MultiHomeSplitter {
 public:
  MultiHomeSplitter(std::vector<Link*> links, double ratio);

  // Index of the link to use, or nullopt when no link is available.
  std::optional<size_t> Choose(SimTime now);
  // Routes and transmits; unroutable datagrams are counted as out-of-range
  // drops on the first link.
  TransmitOutcome Transmit(Datagram datagram, SimTime now);

  double ratio() const { return ratio_; }
  const std::vector<size_t>& assigned() const { return assigned_; }

 private:
  std::vector<Link*> links_;
  double ratio_;
  double credit_ = 0.0;
  std::vector<size_t> assigned_;
};

}  // namespace rtcnetlab

#endif  // RTCNETLAB_NET_MULTIHOME_H_
