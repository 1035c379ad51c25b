#pragma once

#include <optional>
#include <string>

#include "freqstab/disturbance.hpp"
#include "freqstab/model.hpp"
#include "freqstab/sfr.hpp"

namespace freqstab {

enum class Verdict {
  Stable,
  SteadyStateViolation,
  TransientViolation,
  BothViolated,
  OverLimitAt,
};

const char* to_string(Verdict v);

struct Assessment {
  DisturbanceLabel label = DisturbanceLabel::Step;
  std::optional<double> dP0;  // MW
  std::optional<double> dP_max1, dP_max2, dP_max3;
  std::optional<double> dP_max;
  std::optional<double> eta;
  std::optional<double> t_m;  // s after inception, slope labels
  Verdict verdict = Verdict::Stable;
};

/// (dP_max - dP0) / dP_max.
double safety_margin(double dP_max, double dP0);

struct ShortTermEnergies {
  double dS_P = 0.0;      // MW s
  double dS_L = 0.0;      // MW s
  double W_k = 0.0;       // MW s
  double dP0_res = 0.0;   // MW
  double dt_prime = 0.0;  // s
};

ShortTermEnergies short_term_energies(const SystemParameters& p, double dP0,
                                      double dt, double df_m);

/// Largest fault-time deficit whose ride-through keeps |df| below df_max.
double short_term_critical_power(const SystemParameters& p,
                                 const DerivedAggregates& d, double dt,
                                 double df_max);

/// Left side of the short-term quadratic in per-unit of S_N; zero at the
/// critical power.
double short_term_residual(const SystemParameters& p,
                           const DerivedAggregates& d, double dt,
                           double df_max, double dP);

struct SteadyStateCriticals {
  double dP_max1 = 0.0;  // all droop and load relief
  double dP_max2 = 0.0;  // reserve exhausted, load relief only beyond it
};

SteadyStateCriticals step_critical_power_ss(const SystemParameters& p,
                                            double df_ss);

double step_critical_power_transient(const SfrDerived& sfr,
                                     const SystemParameters& p,
                                     double df_max);

Assessment step_assess(const SystemParameters& p, const SfrDerived& sfr,
                       double dP0, const Thresholds& limits);

Assessment short_term_assess(const SystemParameters& p,
                             const DerivedAggregates& d, double dP0,
                             double fault_duration, const Thresholds& limits);

Assessment second_slope_assess(const SystemParameters& p,
                               const SfrDerived& sfr, double k_s,
                               const Thresholds& limits);

/// Signed deviation (Hz) at time t >= t1 once the regulation reserve is used
/// up and only damping remains. t and t1 share the same origin.
double minute_response(const SystemParameters& p, const DerivedAggregates& d,
                       double k_m, double t1, double df_sh, double t);

double minute_overlimit_time(const SystemParameters& p,
                             const DerivedAggregates& d, double k_m,
                             double t1, double df_sh, double df_max);

Assessment minute_slope_assess(const SystemParameters& p,
                               const DerivedAggregates& d, double k_m,
                               double t1, const Thresholds& limits);

/// Dispatch on the estimate's label.
Assessment assess(const DisturbanceEstimate& est, const SystemParameters& p,
                  const Thresholds& limits);

}  // namespace freqstab
