#include "freqstab/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "freqstab/errors.hpp"
#include "freqstab/units.hpp"

namespace freqstab {

namespace {

void require(bool ok, const char* what) {
  if (!ok) {
    throw Error(ErrorCode::InvalidParameter,
                std::string("invalid parameter: ") + what);
  }
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void SystemParameters::validate() const {
  require(finite_all({nominal_frequency, base_power, inertia, new_energy_share,
                      virtual_inertia, load_damping, new_energy_gain, droop,
                      hp_fraction, reheat_time, conventional_capacity,
                      new_energy_capacity, initial_load,
                      generator_pfr_fraction, new_energy_pfr_fraction,
                      recovery_rate}),
          "all parameters must be finite");
  require(nominal_frequency > 0.0, "f_N > 0");
  require(base_power > 0.0, "S_N > 0");
  require(inertia >= 0.0, "H >= 0");
  require(new_energy_share >= 0.0 && new_energy_share <= 1.0,
          "0 <= K_n <= 1");
  require(droop > 0.0, "R > 0");
  require(reheat_time > 0.0, "T_R > 0");
  require(hp_fraction >= 0.0 && hp_fraction <= 1.0, "0 <= F_H <= 1");
  require(generator_pfr_fraction >= 0.0 && generator_pfr_fraction <= 1.0,
          "0 <= m <= 1");
  require(new_energy_pfr_fraction >= 0.0 && new_energy_pfr_fraction <= 1.0,
          "0 <= n <= 1");
  require(virtual_inertia >= 0.0, "K_v >= 0");
  require(conventional_capacity >= 0.0 && new_energy_capacity >= 0.0 &&
              initial_load >= 0.0,
          "capacities and load must be nonnegative");
  require(recovery_rate >= 0.0, "K_R >= 0");
  if (online_generation) require(*online_generation > 0.0, "P_G > 0");
}

DerivedAggregates derive_aggregates(const SystemParameters& p) {
  p.validate();
  DerivedAggregates d;
  d.effective_inertia = p.inertia + p.new_energy_share * p.virtual_inertia / 2.0;
  d.effective_damping = p.load_damping + p.new_energy_share * p.new_energy_gain;
  d.inertia_time_constant = 2.0 * d.effective_inertia;
  return d;
}

void Thresholds::validate() const {
  require(critical_slope >= 0.0, "k1 >= 0");
  require(distribution_time > 0.0, "T_dist > 0");
  require(power_threshold >= 0.0, "dP_sh >= 0");
  require(deadband >= 0.0, "f_d >= 0");
  require(frequency_threshold > 0.0 && frequency_threshold < transient_limit,
          "0 < df_sh < df_max_lim");
  require(steady_state_limit > 0.0 && steady_state_limit < transient_limit,
          "0 < df_ss_lim < df_max_lim");
}

double compute_power_threshold(double critical_slope, double distribution_time) {
  require(critical_slope >= 0.0, "k1 >= 0");
  require(distribution_time > 0.0, "T_dist > 0");
  return critical_slope * distribution_time;
}

double compute_frequency_threshold(const SystemParameters& p, double deadband) {
  const double gain = p.governor_gain() + p.new_energy_gain;
  require(gain > 0.0, "K_G + K_w > 0");
  require(p.base_power > 0.0, "S_N > 0");
  const double reserve_pu = units::to_per_unit(p.pfr_capacity(), p.base_power);
  return units::from_per_unit(reserve_pu / gain, p.nominal_frequency) + deadband;
}

Thresholds resolve_thresholds(const ThresholdConfig& cfg,
                              const SystemParameters& p) {
  Thresholds th;
  th.critical_slope = cfg.critical_slope;
  th.distribution_time = cfg.distribution_time;
  th.deadband = cfg.deadband;
  th.steady_state_limit = cfg.steady_state_limit;
  th.transient_limit = cfg.transient_limit;
  th.power_threshold = cfg.power_threshold.value_or(
      compute_power_threshold(cfg.critical_slope, cfg.distribution_time));
  th.frequency_threshold = cfg.frequency_threshold.value_or(
      compute_frequency_threshold(p, cfg.deadband));
  th.validate();
  return th;
}

}  // namespace freqstab
