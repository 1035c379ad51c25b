#pragma once

#include <optional>
#include <string>

namespace freqstab {

enum class DisturbanceLabel { ShortTerm, Step, SecondSlope, MinuteSlope };

const char* to_string(DisturbanceLabel label);
DisturbanceLabel label_from_string(const std::string& name);

/// Classified disturbance with the intensity fields of its label filled in.
/// Times are absolute trace times in s.
struct DisturbanceEstimate {
  DisturbanceLabel label = DisturbanceLabel::Step;
  double onset_time = 0.0;
  // Fitted start of the disturbance; differs from onset_time for ramps,
  // where onset is only seen once the ramp clears the noise floor.
  double inception_time = 0.0;

  std::optional<double> dP0;             // ShortTerm, Step (MW)
  std::optional<double> k_s;             // SecondSlope (MW/s)
  std::optional<double> k_m;             // MinuteSlope (MW/s)
  std::optional<double> t1;              // MinuteSlope, s after inception
  std::optional<double> fault_duration;  // ShortTerm (s)
  std::optional<double> threshold_crossing;  // absolute time dP_sh was passed

  // Diagnostics.
  double fit_slope = 0.0;
  double fit_residual_ratio = 1.0;
  double noise_floor = 0.0;
};

}  // namespace freqstab
