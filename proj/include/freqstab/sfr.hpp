#pragma once

#include <complex>

#include "freqstab/model.hpp"

namespace freqstab {

/// Second-order system-frequency-response parameterisation (swing equation
/// plus reheat governor, mechanical gain 1).
///
/// The mode time constants T1, T2 are kept complex so that the under- and
/// over-damped cases share one evaluation path; for zeta < 1 they form a
/// conjugate pair and every expression below is real up to rounding.
struct SfrDerived {
  double omega_n = 0.0;  // rad/s
  double zeta = 0.0;
  double omega_r = 0.0;  // damped frequency, 0 when zeta >= 1
  double alpha = 0.0;    // overshoot coefficient, 0 when zeta >= 1
  std::complex<double> T1, T2;
  std::complex<double> kc1, kc2;

  double gain = 0.0;         // R / (K_Lsys*R + 1): steady-state pu/pu
  double reheat_time = 0.0;  // T_R
};

SfrDerived derive_sfr(const SystemParameters& p, const DerivedAggregates& d);

struct StepNadir {
  double time = 0.0;       // s after inception; +inf when monotone
  double deviation = 0.0;  // Hz, negative for a generation deficit
};

/// Multiplier on the steady-state deviation that gives the peak deviation
/// of a step response.
double step_overshoot_factor(const SfrDerived& sfr);

/// Time of the first stationary point of the step response.
double step_nadir_time(const SfrDerived& sfr);

StepNadir step_nadir(const SfrDerived& sfr, const SystemParameters& p,
                     double dP0);

/// Frequency deviation (Hz) t seconds after a dP0 MW step, no saturation.
double step_response(const SfrDerived& sfr, const SystemParameters& p,
                     double dP0, double t);

/// The bracket of the ramp response, before scaling: t + T_R - T1 - T2 +
/// kc1 e^{-t/T1} + kc2 e^{-t/T2}. Exposed so callers can check that the
/// imaginary parts cancel.
std::complex<double> ramp_shape(const SfrDerived& sfr, double t);

/// Frequency deviation (Hz) t seconds after a ramp of k_s MW/s begins.
double ramp_response(const SfrDerived& sfr, const SystemParameters& p,
                     double k_s, double t);

/// First t > 0 with |ramp_response| = df_max.
double ramp_overlimit_time(const SfrDerived& sfr, const SystemParameters& p,
                           double k_s, double df_max);

}  // namespace freqstab
