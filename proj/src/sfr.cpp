#include "freqstab/sfr.hpp"

#include <cmath>
#include <limits>

#include "freqstab/errors.hpp"
#include "freqstab/roots.hpp"
#include "freqstab/units.hpp"

namespace freqstab {

namespace {

using cplx = std::complex<double>;

constexpr double kCriticalNudge = 1e-9;

}  // namespace

SfrDerived derive_sfr(const SystemParameters& p, const DerivedAggregates& d) {
  const double R = p.droop;
  const double TR = p.reheat_time;
  const double H = d.effective_inertia;
  const double D = d.effective_damping;
  if (!(R > 0.0) || !(TR > 0.0) || !(H > 0.0)) {
    throw Error(ErrorCode::InvalidParameter,
                "SFR model needs R, T_R and H_sys > 0");
  }
  if (D * R + 1.0 <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, "SFR model needs K_Lsys*R + 1 > 0");
  }

  SfrDerived s;
  s.reheat_time = TR;
  s.gain = R / (D * R + 1.0);
  s.omega_n = std::sqrt((D * R + 1.0) / (2.0 * H * R * TR));
  s.zeta = s.omega_n * (2.0 * H * R + (D * R + p.hp_fraction) * TR) /
           (2.0 * (D * R + 1.0));
  if (s.zeta == 1.0) s.zeta += kCriticalNudge;

  const cplx root = std::sqrt(cplx(s.zeta * s.zeta - 1.0, 0.0));
  s.T1 = (s.zeta + root) / s.omega_n;
  s.T2 = (s.zeta - root) / s.omega_n;
  s.kc1 = (s.T1 * s.T1 - TR * s.T1) / (s.T1 - s.T2);
  s.kc2 = (s.T2 * s.T2 - TR * s.T2) / (s.T2 - s.T1);

  if (s.zeta < 1.0) {
    const double one_minus = 1.0 - s.zeta * s.zeta;
    s.omega_r = s.omega_n * std::sqrt(one_minus);
    s.alpha = std::sqrt((1.0 - 2.0 * TR * s.zeta * s.omega_n +
                         TR * TR * s.omega_n * s.omega_n) /
                        one_minus);
  }
  return s;
}

double step_nadir_time(const SfrDerived& s) {
  const double TR = s.reheat_time;
  if (s.zeta < 1.0) {
    // atan2 keeps the angle in (0, pi) so the stationary point is positive.
    const double angle =
        std::atan2(s.omega_r * TR, s.zeta * s.omega_n * TR - 1.0);
    return angle / s.omega_r;
  }
  const double T1 = s.T1.real();
  const double T2 = s.T2.real();
  if (T1 >= TR) return std::numeric_limits<double>::infinity();
  // Root of d/dt of the step response in its two-exponential form.
  const double ratio = (TR - T2) * T1 / ((TR - T1) * T2);
  return std::log(ratio) / (1.0 / T2 - 1.0 / T1);
}

namespace {

// Step response normalised to its steady-state value.
double unit_step_shape(const SfrDerived& s, double t) {
  const cplx v = 1.0 - s.kc1 / s.T1 * std::exp(-t / s.T1) -
                 s.kc2 / s.T2 * std::exp(-t / s.T2);
  return v.real();
}

}  // namespace

double step_overshoot_factor(const SfrDerived& s) {
  const double tm = step_nadir_time(s);
  if (!std::isfinite(tm)) return 1.0;
  if (s.zeta < 1.0) {
    return 1.0 + std::sqrt(1.0 - s.zeta * s.zeta) * s.alpha *
                     std::exp(-s.zeta * s.omega_n * tm);
  }
  return unit_step_shape(s, tm);
}

StepNadir step_nadir(const SfrDerived& s, const SystemParameters& p,
                     double dP0) {
  if (!(dP0 > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "step nadir: dP0 must be > 0");
  }
  const double dp_pu = units::to_per_unit(dP0, p.base_power);
  StepNadir n;
  n.time = step_nadir_time(s);
  n.deviation = -units::from_per_unit(dp_pu * s.gain * step_overshoot_factor(s),
                                      p.nominal_frequency);
  return n;
}

double step_response(const SfrDerived& s, const SystemParameters& p,
                     double dP0, double t) {
  if (t <= 0.0) return 0.0;
  const double dp_pu = units::to_per_unit(dP0, p.base_power);
  return -units::from_per_unit(dp_pu * s.gain * unit_step_shape(s, t),
                               p.nominal_frequency);
}

std::complex<double> ramp_shape(const SfrDerived& s, double t) {
  return t + s.reheat_time - s.T1 - s.T2 + s.kc1 * std::exp(-t / s.T1) +
         s.kc2 * std::exp(-t / s.T2);
}

double ramp_response(const SfrDerived& s, const SystemParameters& p,
                     double k_s, double t) {
  if (t < 0.0) {
    throw Error(ErrorCode::OutOfRange, "ramp response: t must be >= 0");
  }
  const double k_pu = units::to_per_unit(k_s, p.base_power);
  return -units::from_per_unit(k_pu * s.gain * ramp_shape(s, t).real(),
                               p.nominal_frequency);
}

double ramp_overlimit_time(const SfrDerived& s, const SystemParameters& p,
                           double k_s, double df_max) {
  if (!(k_s > 0.0) || !(df_max > 0.0)) {
    throw Error(ErrorCode::InvalidParameter,
                "ramp over-limit time: k_s and df_max must be > 0");
  }
  // The ramp response grows monotonically (its derivative is a step
  // response), so the first bracket that straddles the limit holds the root.
  CrossingSearch opt;
  opt.step = s.reheat_time / 4.0;
  opt.tolerance = 1e-9;
  return first_root_after(
      [&](double t) { return std::abs(ramp_response(s, p, k_s, t)) - df_max; },
      0.0, opt);
}

}  // namespace freqstab
