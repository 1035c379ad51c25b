#pragma once

// Per-unit conversions. Powers are per-unit of the system base S_N, frequency
// deviations are per-unit of the nominal frequency f_N. Public functions take
// and return MW / Hz; the conversion happens at the boundary.

namespace freqstab::units {

constexpr double to_per_unit(double value, double base) { return value / base; }
constexpr double from_per_unit(double value_pu, double base) {
  return value_pu * base;
}

}  // namespace freqstab::units
