#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace freqstab {

/// Sampled signal on a strictly increasing time grid.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Throws InvalidParameter when lengths differ or times are not strictly
  /// increasing.
  void validate() const;

  /// Linear interpolation; throws OutOfRange outside [front, back].
  double at(double t) const;

  /// Index range [first, last) of samples with lo <= t <= hi.
  std::pair<std::size_t, std::size_t> index_range(double lo, double hi) const;
};

/// Linear interpolation on a sampled grid; times must be strictly increasing
/// and t inside the grid.
double interpolate(std::span<const double> times, std::span<const double> values,
                   double t);

/// First time |values| reaches `level`, linearly interpolated between samples.
/// Returns a negative number when never reached.
double first_crossing(std::span<const double> times,
                      std::span<const double> values, double level,
                      std::size_t start = 0);

}  // namespace freqstab
