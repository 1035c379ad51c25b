#pragma once

#include <optional>

#include "freqstab/disturbance.hpp"
#include "freqstab/model.hpp"
#include "freqstab/timeseries.hpp"

namespace freqstab {

struct ClassifierOptions {
  std::optional<double> noise_floor;  // MW; derived from the trace if absent
  double noise_sigma_factor = 4.0;    // floor >= this many noise sigmas
  double slope_significance = 0.5;    // |k_s| must exceed this fraction of k1
  double max_residual_ratio = 0.5;    // line fit vs constant fit
  double watch_window = 2.0;          // s after onset for a short-term return
  double return_tolerance = 0.05;     // fraction of peak power
};

/// Robust estimate (MW) of white measurement noise from first differences.
double estimate_noise_sigma(const TimeSeries& trace);

double default_noise_floor(const TimeSeries& dP, const Thresholds& th,
                           const ClassifierOptions& opt = {});

/// First sample time where |dP| exceeds the floor on two consecutive samples.
double detect_onset(const TimeSeries& dP, double noise_floor);

/// Label and size the disturbance in dP (MW) given the inertial-centre
/// deviation df (Hz). Returns nothing when the trace moves but neither the
/// power nor the frequency threshold is crossed. df may be empty, in which
/// case only the power branch can fire.
std::optional<DisturbanceEstimate> classify(const TimeSeries& dP,
                                            const TimeSeries& df,
                                            const Thresholds& th,
                                            const SystemParameters& p,
                                            const ClassifierOptions& opt = {});

}  // namespace freqstab
