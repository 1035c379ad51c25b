#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "freqstab/model.hpp"
#include "freqstab/timeseries.hpp"

namespace freqstab {

/// Measured electromagnetic-power deviations of each generator (MW), and
/// optionally each generator's frequency (Hz), on a shared time grid.
struct ResponseSet {
  std::vector<double> times;
  std::vector<std::string> generator_ids;
  std::vector<std::vector<double>> delta_pe;
  // Either empty or one series per generator.
  std::vector<std::vector<double>> frequency;

  std::size_t generator_count() const { return generator_ids.size(); }
  bool has_frequency() const { return !frequency.empty(); }
  void validate() const;
};

struct GeneratorCoupling {
  std::string id;
  double internal_voltage = 1.0;  // E_i, pu
  double susceptance = 1.0;       // B_ip, pu
  double angle = 0.0;             // delta_ip, rad
  double angle_deviation = 0.0;   // d_delta_ip, rad
};

/// Linearised coupling of each generator to the disturbance point.
struct NetworkSnapshot {
  double disturbance_voltage = 1.0;  // U_p, pu
  std::vector<GeneratorCoupling> generators;

  void validate() const;
};

/// U_p * E_i * B_ip * cos(delta_ip): how strongly generator i picks up an
/// angle swing at the disturbance point.
double synchronizing_coefficient(double disturbance_voltage,
                                 const GeneratorCoupling& g);

struct PowerSample {
  double mw = 0.0;
  bool empty_set = false;  // no generators: value is 0 and flagged
};

/// Sum of generator power deviations at time t (linear interpolation).
PowerSample disturbance_power_from_pe(const ResponseSet& r, double t);

/// Sum of generator power deviations at every sample.
TimeSeries total_disturbance_power(const ResponseSet& r);

/// Disturbance power (MW) from angle swings with synchronised generators.
double disturbance_power_from_network(const NetworkSnapshot& s,
                                      double base_power);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;  // value at t = 0
  double residual_ss = 0.0;
  double constant_ss = 0.0;  // sum of squares around the mean
  std::size_t samples = 0;

  double value_at(double t) const { return intercept + slope * t; }
  /// Time where the fitted line crosses zero.
  double zero_crossing() const { return -intercept / slope; }
  /// Residual of the line relative to a constant fit; 1 when the data are
  /// flat (nothing to explain).
  double residual_ratio() const;
};

/// Ordinary least squares; throws InsufficientSamples below 3 points.
LineFit fit_line(std::span<const double> times, std::span<const double> values);

/// Least-squares ramp rate (MW/s) of the summed disturbance power over
/// [t_a, t_b].
LineFit slope_estimate(const ResponseSet& r, double t_a, double t_b);

/// Ramp rate that exhausts load relief plus the regulation reserve at t1:
/// (K_L * df_sh/f_N * P_L0 + m*P_GN + n*P_NEW) / t1.
double minute_slope_at_threshold(const SystemParameters& p, double df_sh,
                                 double t1);

/// Inertia-weighted mean of the per-generator frequencies, returned as a
/// deviation from f_N in Hz. Empty weights mean equal weighting.
TimeSeries inertial_center_deviation(const ResponseSet& r,
                                     std::span<const double> weights,
                                     double nominal_frequency);

}  // namespace freqstab
