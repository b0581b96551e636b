#ifndef RTCNETLAB_METRICS_SUMMARY_H_
#define RTCNETLAB_METRICS_SUMMARY_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace rtcnetlab {

constexpr int kSummaryVersion = 1;

// Playout loss band regarded as acceptable for real-time video.
constexpr double kAcceptablePlrLow = 0.01;
constexpr double kAcceptablePlrHigh = 0.03;

// "below", "within" or "above" the acceptable band.
std::string PlrBand(double plr);

// Value at quantile q in [0, 1] of `values` (nearest rank); 0 when empty.
double Quantile(std::vector<double> values, double q);

// Scalar summary fields compared between runs, as JSON pointers.
const std::vector<std::string>& ComparedFields();

// Per-field {a, b, delta = b - a, ratio = b / a}. Swapping the arguments
// negates every delta.
nlohmann::json CompareSummaries(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace rtcnetlab

#endif  // RTCNETLAB_METRICS_SUMMARY_H_
