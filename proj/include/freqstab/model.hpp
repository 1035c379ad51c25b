#pragma once

#include <optional>

namespace freqstab {

/// Aggregated grid model. Powers in MW, times in s, frequency in Hz; the
/// gains are per-unit on their own bases.
struct SystemParameters {
  double nominal_frequency = 50.0;       // f_N, Hz
  double base_power = 1000.0;            // S_N, MW
  double inertia = 4.0;                  // H, s on S_N
  double new_energy_share = 0.0;         // K_n
  double virtual_inertia = 0.0;          // K_v, s
  double load_damping = 1.0;             // K_L, pu/pu
  double new_energy_gain = 0.0;          // K_w, pu/pu
  double droop = 0.05;                   // R, pu
  double hp_fraction = 0.3;              // F_H
  double reheat_time = 10.0;             // T_R, s
  double conventional_capacity = 0.0;    // P_GN, MW
  double new_energy_capacity = 0.0;      // P_NEW, MW
  double initial_load = 0.0;             // P_L0, MW
  double generator_pfr_fraction = 0.0;   // m
  double new_energy_pfr_fraction = 0.0;  // n
  double recovery_rate = 0.0;            // K_R, MW/s
  std::optional<double> online_generation;  // P_G, MW

  /// K_G = 1/R.
  double governor_gain() const { return 1.0 / droop; }
  /// m*P_GN + n*P_NEW, the primary-regulation reserve in MW.
  double pfr_capacity() const {
    return generator_pfr_fraction * conventional_capacity +
           new_energy_pfr_fraction * new_energy_capacity;
  }
  /// P_G used by the short-term criterion; defaults to P_GN + P_NEW.
  double generation_base() const {
    return online_generation.value_or(conventional_capacity +
                                      new_energy_capacity);
  }

  /// Throws Error(InvalidParameter) naming the first violated invariant.
  void validate() const;
};

struct DerivedAggregates {
  double effective_inertia = 0.0;   // H_sys, s
  double effective_damping = 0.0;   // K_Lsys, pu/pu
  double inertia_time_constant = 0.0;  // T_J, s
};

DerivedAggregates derive_aggregates(const SystemParameters& p);

struct Thresholds {
  double critical_slope = 0.0;        // k1, MW/s
  double distribution_time = 0.5;     // T_dist, s
  double power_threshold = 0.0;       // dP_sh, MW
  double frequency_threshold = 0.0;   // df_sh, Hz
  double deadband = 0.0;              // f_d, Hz
  double steady_state_limit = 0.2;    // df_ss_lim, Hz
  double transient_limit = 0.75;      // df_max_lim, Hz

  void validate() const;
};

/// Threshold inputs as they appear in a scenario file; absent power or
/// frequency thresholds are derived from the operating point.
struct ThresholdConfig {
  double critical_slope = 0.0;
  double distribution_time = 0.5;
  std::optional<double> power_threshold;
  std::optional<double> frequency_threshold;
  double deadband = 0.0;
  double steady_state_limit = 0.2;
  double transient_limit = 0.75;
};

/// dP_sh = k1 * T_dist.
double compute_power_threshold(double critical_slope, double distribution_time);

/// Frequency deviation (Hz) at which the primary regulation reserve is used
/// up, plus the activation deadband.
double compute_frequency_threshold(const SystemParameters& p, double deadband);

Thresholds resolve_thresholds(const ThresholdConfig& cfg,
                              const SystemParameters& p);

}  // namespace freqstab
