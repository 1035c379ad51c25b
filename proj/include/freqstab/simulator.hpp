#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "freqstab/estimator.hpp"
#include "freqstab/model.hpp"

namespace freqstab {

struct StepDisturbance {
  double dP0 = 0.0;  // MW deficit
  double t0 = 0.0;
};

struct RampDisturbance {
  double k = 0.0;  // MW/s
  double t0 = 0.0;
  double duration = 0.0;  // holds the reached level afterwards
};

/// Deficit held for the fault, then recovered linearly at recovery_rate.
struct ShortTermDisturbance {
  double dP0 = 0.0;
  double t0 = 0.0;
  double fault_duration = 0.0;
  double recovery_rate = 0.0;  // MW/s
};

using Disturbance =
    std::variant<StepDisturbance, RampDisturbance, ShortTermDisturbance>;

/// Deficit (MW) injected at time t.
double disturbance_power(const Disturbance& d, double t);

/// Times where the injected power has a kink or jump, sorted.
std::vector<double> disturbance_breakpoints(const Disturbance& d);

double disturbance_start(const Disturbance& d);

struct SimOptions {
  bool saturation = true;
  double deadband = 0.0;           // Hz
  double new_energy_lag = 0.1;     // s, 0 for instantaneous
  double divergence_limit = 5.0;   // Hz
  std::optional<double> stop_at;   // stop once |df| reaches this (Hz)
};

struct Scenario {
  SystemParameters params;
  Disturbance disturbance;
  double horizon = 20.0;
  double dt_step = 1e-3;
  SimOptions options;

  void validate() const;
};

/// Sampled states. Powers are signed MW deviations: p_mech is the governor
/// output after the clamp, p_dist the injected deficit, and p_load_damp the
/// damping drawn by load and new energy, so
///   T_J d(df/f_N)/dt = (p_mech - p_dist - p_load_damp) / S_N.
struct SimTrace {
  std::vector<double> times;
  std::vector<double> df;  // Hz
  std::vector<double> p_mech;
  std::vector<double> p_dist;
  std::vector<double> p_load_damp;
  std::optional<double> pfr_saturated_at;

  std::size_t size() const { return times.size(); }
};

SimTrace simulate(const Scenario& s);

/// First time |df| >= df_max, interpolated between samples.
std::optional<double> find_overlimit_time(const SimTrace& trace, double df_max);

/// Largest mismatch (pu) of the swing balance, integrated over sample pairs
/// with Simpson's rule. Windows touching a disturbance breakpoint are
/// skipped, as are windows where the governor clamp or deadband switches.
double balance_residual(const SimTrace& trace, const Scenario& s);

struct NoiseOptions {
  double sigma = 0.0;  // MW, standard deviation of the summed power
  std::uint64_t seed = 0;
};

/// Split the injected power over generators in proportion to `weights`.
/// The last generator takes the remainder so the split sums exactly before
/// noise is added. Frequency columns carry f_N + df.
ResponseSet synthesize_generator_responses(const SimTrace& trace,
                                           std::span<const double> weights,
                                           double nominal_frequency,
                                           const NoiseOptions& noise = {});

/// Same split, with weights taken from the snapshot's synchronizing
/// coefficients.
ResponseSet synthesize_generator_responses(const SimTrace& trace,
                                           const NetworkSnapshot& snapshot,
                                           double nominal_frequency,
                                           const NoiseOptions& noise = {});

/// Give every generator the same angle swing so the snapshot carries dP MW.
NetworkSnapshot snapshot_for_power(NetworkSnapshot snapshot, double dP,
                                   double base_power);

}  // namespace freqstab
