#include "freqstab/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freqstab/errors.hpp"

namespace freqstab {

void TimeSeries::validate() const {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::InvalidParameter,
                "time series: times and values differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      std::ostringstream os;
      os << "time series: times not strictly increasing at index " << i;
      throw Error(ErrorCode::InvalidParameter, os.str());
    }
  }
}

double TimeSeries::at(double t) const { return interpolate(times, values, t); }

std::pair<std::size_t, std::size_t> TimeSeries::index_range(double lo,
                                                            double hi) const {
  auto first = std::lower_bound(times.begin(), times.end(), lo);
  auto last = std::upper_bound(first, times.end(), hi);
  return {static_cast<std::size_t>(first - times.begin()),
          static_cast<std::size_t>(last - times.begin())};
}

double interpolate(std::span<const double> times,
                   std::span<const double> values, double t) {
  if (times.empty()) {
    throw Error(ErrorCode::OutOfRange, "interpolate: empty series");
  }
  if (t < times.front() || t > times.back()) {
    std::ostringstream os;
    os << "interpolate: t=" << t << " outside [" << times.front() << ", "
       << times.back() << "]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return values.back();
  const auto hi = static_cast<std::size_t>(it - times.begin());
  if (hi == 0) return values.front();
  const auto lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

double first_crossing(std::span<const double> times,
                      std::span<const double> values, double level,
                      std::size_t start) {
  for (std::size_t i = start; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    if (v >= level) {
      if (i == start) return times[i];
      const double prev = std::abs(values[i - 1]);
      if (v == prev) return times[i];
      const double w = (level - prev) / (v - prev);
      return times[i - 1] + w * (times[i] - times[i - 1]);
    }
  }
  return -1.0;
}

}  // namespace freqstab
