#include "freqstab/assessor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freqstab/errors.hpp"
#include "freqstab/roots.hpp"
#include "freqstab/units.hpp"

namespace freqstab {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be > 0");
  }
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::SteadyStateViolation: return "steady-state-violation";
    case Verdict::TransientViolation: return "transient-violation";
    case Verdict::BothViolated: return "both-violated";
    case Verdict::OverLimitAt: return "over-limit-at";
  }
  return "unknown";
}

double safety_margin(double dP_max, double dP0) {
  require_positive(dP_max, "dP_max");
  return (dP_max - dP0) / dP_max;
}

ShortTermEnergies short_term_energies(const SystemParameters& p, double dP0,
                                      double dt, double df_m) {
  require_positive(dP0, "dP0");
  require_positive(dt, "fault duration");
  require_positive(p.recovery_rate, "K_R");
  const double f = units::to_per_unit(std::abs(df_m), p.nominal_frequency);
  const double load_relief = p.load_damping * f * p.initial_load;

  ShortTermEnergies e;
  e.dt_prime = (dP0 - load_relief) / p.recovery_rate;
  if (e.dt_prime < 0.0) {
    throw Error(ErrorCode::Infeasible,
                "load relief alone exceeds the disturbance power");
  }
  e.dP0_res = p.recovery_rate * e.dt_prime;
  const double span = dt + e.dt_prime;
  e.dS_P = (2.0 * dP0 - e.dP0_res) * span / 2.0;
  e.dS_L = load_relief * span / 2.0;
  e.W_k = f > 0.0 ? (e.dS_P - e.dS_L) / (2.0 * f) : 0.0;
  return e;
}

double short_term_critical_power(const SystemParameters& p,
                                 const DerivedAggregates& d, double dt,
                                 double df_max) {
  require_positive(dt, "fault duration");
  require_positive(df_max, "df_max");
  require_positive(p.recovery_rate, "K_R");
  const double f = units::to_per_unit(df_max, p.nominal_frequency);
  const double a = 1.0 / p.recovery_rate;
  const double b = dt - p.load_damping * p.initial_load * f / p.recovery_rate;
  const double c = 4.0 * d.effective_inertia * f * p.generation_base();
  require_positive(c, "H_sys * P_G");
  // a x^2 + b x - c = 0 with a, c > 0 has exactly one positive root; pick
  // the form that avoids cancellation.
  const double disc = std::sqrt(b * b + 4.0 * a * c);
  return b >= 0.0 ? 2.0 * c / (b + disc) : (disc - b) / (2.0 * a);
}

double short_term_residual(const SystemParameters& p,
                           const DerivedAggregates& d, double dt,
                           double df_max, double dP) {
  const double f = units::to_per_unit(df_max, p.nominal_frequency);
  const double lhs =
      dP * dP / p.recovery_rate +
      dP * (dt - p.load_damping * p.initial_load * f / p.recovery_rate) -
      4.0 * d.effective_inertia * f * p.generation_base();
  return units::to_per_unit(lhs, p.base_power);
}

SteadyStateCriticals step_critical_power_ss(const SystemParameters& p,
                                            double df_ss) {
  require_positive(df_ss, "df_ss");
  const double f = units::to_per_unit(df_ss, p.nominal_frequency);
  SteadyStateCriticals out;
  out.dP_max1 = (p.load_damping * p.initial_load +
                 p.governor_gain() * p.conventional_capacity +
                 p.new_energy_gain * p.new_energy_capacity) *
                f;
  out.dP_max2 = p.pfr_capacity() + p.load_damping * f * p.initial_load;
  return out;
}

double step_critical_power_transient(const SfrDerived& sfr,
                                     const SystemParameters& p,
                                     double df_max) {
  require_positive(df_max, "df_max");
  const double f = units::to_per_unit(df_max, p.nominal_frequency);
  const double dp_pu = f / (sfr.gain * step_overshoot_factor(sfr));
  return units::from_per_unit(dp_pu, p.base_power);
}

Assessment step_assess(const SystemParameters& p, const SfrDerived& sfr,
                       double dP0, const Thresholds& limits) {
  require_positive(dP0, "dP0");
  const auto ss = step_critical_power_ss(p, limits.steady_state_limit);
  Assessment a;
  a.label = DisturbanceLabel::Step;
  a.dP0 = dP0;
  a.dP_max1 = ss.dP_max1;
  a.dP_max2 = ss.dP_max2;
  a.dP_max3 = step_critical_power_transient(sfr, p, limits.transient_limit);
  a.dP_max = std::min({ss.dP_max1, ss.dP_max2, *a.dP_max3});
  a.eta = safety_margin(*a.dP_max, dP0);

  const bool ss_bad = dP0 > std::min(ss.dP_max1, ss.dP_max2);
  const bool tr_bad = dP0 > *a.dP_max3;
  if (ss_bad && tr_bad)
    a.verdict = Verdict::BothViolated;
  else if (ss_bad)
    a.verdict = Verdict::SteadyStateViolation;
  else if (tr_bad)
    a.verdict = Verdict::TransientViolation;
  else
    a.verdict = Verdict::Stable;
  return a;
}

Assessment short_term_assess(const SystemParameters& p,
                             const DerivedAggregates& d, double dP0,
                             double fault_duration, const Thresholds& limits) {
  require_positive(dP0, "dP0");
  Assessment a;
  a.label = DisturbanceLabel::ShortTerm;
  a.dP0 = dP0;
  a.dP_max = short_term_critical_power(p, d, fault_duration,
                                       limits.transient_limit);
  a.eta = safety_margin(*a.dP_max, dP0);
  a.verdict = dP0 > *a.dP_max ? Verdict::TransientViolation : Verdict::Stable;
  return a;
}

Assessment second_slope_assess(const SystemParameters& p,
                               const SfrDerived& sfr, double k_s,
                               const Thresholds& limits) {
  Assessment a;
  a.label = DisturbanceLabel::SecondSlope;
  a.t_m = ramp_overlimit_time(sfr, p, k_s, limits.transient_limit);
  a.verdict = Verdict::OverLimitAt;
  return a;
}

double minute_response(const SystemParameters& p, const DerivedAggregates& d,
                       double k_m, double t1, double df_sh, double t) {
  const double K = d.effective_damping;
  const double TJ = d.inertia_time_constant;
  require_positive(K, "K_Lsys");
  require_positive(TJ, "T_J");
  const double k = units::to_per_unit(k_m, p.base_power);
  const double f_sh = units::to_per_unit(df_sh, p.nominal_frequency);
  const double x = -(k * TJ / (K * K)) * std::exp(K * (t1 - t) / TJ) +
                   (k / K) * (t1 - t + TJ / K) - f_sh;
  return units::from_per_unit(x, p.nominal_frequency);
}

double minute_overlimit_time(const SystemParameters& p,
                             const DerivedAggregates& d, double k_m,
                             double t1, double df_sh, double df_max) {
  require_positive(k_m, "k_m");
  if (!(df_max > df_sh)) {
    throw Error(ErrorCode::InvalidParameter, "df_max must exceed df_sh");
  }
  CrossingSearch opt;
  opt.step = std::max(1.0, d.inertia_time_constant / d.effective_damping);
  opt.tolerance = 1e-6;
  return first_root_after(
      [&](double t) {
        return std::abs(minute_response(p, d, k_m, t1, df_sh, t)) - df_max;
      },
      t1, opt);
}

Assessment minute_slope_assess(const SystemParameters& p,
                               const DerivedAggregates& d, double k_m,
                               double t1, const Thresholds& limits) {
  Assessment a;
  a.label = DisturbanceLabel::MinuteSlope;
  a.t_m = minute_overlimit_time(p, d, k_m, t1, limits.frequency_threshold,
                                limits.transient_limit);
  a.verdict = Verdict::OverLimitAt;
  return a;
}

Assessment assess(const DisturbanceEstimate& est, const SystemParameters& p,
                  const Thresholds& limits) {
  const DerivedAggregates d = derive_aggregates(p);
  auto need = [&](const std::optional<double>& v, const char* field) {
    if (!v) {
      std::ostringstream os;
      os << to_string(est.label) << " estimate is missing " << field;
      throw Error(ErrorCode::InvalidParameter, os.str());
    }
    return *v;
  };
  switch (est.label) {
    case DisturbanceLabel::ShortTerm:
      return short_term_assess(p, d, need(est.dP0, "dP0"),
                               need(est.fault_duration, "fault_duration"),
                               limits);
    case DisturbanceLabel::Step:
      return step_assess(p, derive_sfr(p, d), need(est.dP0, "dP0"), limits);
    case DisturbanceLabel::SecondSlope:
      return second_slope_assess(p, derive_sfr(p, d), need(est.k_s, "k_s"),
                                 limits);
    case DisturbanceLabel::MinuteSlope:
      return minute_slope_assess(p, d, need(est.k_m, "k_m"),
                                 need(est.t1, "t1"), limits);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown disturbance label");
}

}  // namespace freqstab
