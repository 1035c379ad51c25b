#include "freqstab/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "freqstab/errors.hpp"
#include "freqstab/timeseries.hpp"
#include "freqstab/units.hpp"

namespace freqstab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Injected power evaluated with the formula of the piece that contains
// t_ref. Keeps each integration substep on one smooth branch even when its
// endpoints sit exactly on a breakpoint.
double piece_value(const Disturbance& d, double t, double t_ref) {
  return std::visit(
      overloaded{
          [&](const StepDisturbance& s) { return t_ref < s.t0 ? 0.0 : s.dP0; },
          [&](const RampDisturbance& r) {
            if (t_ref < r.t0) return 0.0;
            if (t_ref < r.t0 + r.duration) return r.k * (t - r.t0);
            return r.k * r.duration;
          },
          [&](const ShortTermDisturbance& s) {
            const double cleared = s.t0 + s.fault_duration;
            const double recovered = cleared + s.dP0 / s.recovery_rate;
            if (t_ref < s.t0 || t_ref >= recovered) return 0.0;
            if (t_ref < cleared) return s.dP0;
            return s.dP0 - s.recovery_rate * (t - cleared);
          },
      },
      d);
}

using State = std::array<double, 3>;  // df pu, reheat state, new-energy output

struct Plant {
  double TJ, KL, Kne, R, FH, TR, cap, fd, lag;
  bool saturation;

  // Hard threshold: no response inside the band, full droop outside it.
  double deadband(double x) const { return std::abs(x) <= fd ? 0.0 : x; }
  double command(double x) const { return -deadband(x) / R; }
  double governor_raw(const State& s) const {
    return FH * command(s[0]) + (1.0 - FH) * s[1];
  }
  double governor(const State& s) const {
    const double g = governor_raw(s);
    return saturation ? std::clamp(g, -cap, cap) : g;
  }
  double new_energy(const State& s) const {
    return lag > 0.0 ? s[2] : -Kne * s[0];
  }
  // Power drawn by damping, pu; positive when the frequency is high.
  double damping(const State& s) const { return KL * s[0] - new_energy(s); }

  State rhs(const State& s, double dist_pu) const {
    State ds;
    ds[0] = (governor(s) - dist_pu - damping(s)) / TJ;
    ds[1] = (command(s[0]) - s[1]) / TR;
    ds[2] = lag > 0.0 ? (-Kne * s[0] - s[2]) / lag : 0.0;
    return ds;
  }
};

State axpy(const State& s, double h, const State& k) {
  return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
}

}  // namespace

double disturbance_power(const Disturbance& d, double t) {
  return piece_value(d, t, t);
}

std::vector<double> disturbance_breakpoints(const Disturbance& d) {
  return std::visit(
      overloaded{
          [](const StepDisturbance& s) { return std::vector<double>{s.t0}; },
          [](const RampDisturbance& r) {
            return std::vector<double>{r.t0, r.t0 + r.duration};
          },
          [](const ShortTermDisturbance& s) {
            const double cleared = s.t0 + s.fault_duration;
            return std::vector<double>{s.t0, cleared,
                                       cleared + s.dP0 / s.recovery_rate};
          },
      },
      d);
}

double disturbance_start(const Disturbance& d) {
  return std::visit([](const auto& x) { return x.t0; }, d);
}

void Scenario::validate() const {
  params.validate();
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::InvalidParameter, "scenario: " + what);
  };
  const double t0 = disturbance_start(disturbance);
  if (!(t0 >= 0.0)) bad("t0 must be >= 0");
  if (!(horizon > t0)) bad("horizon must exceed t0");
  if (!(dt_step > 0.0)) bad("dt_step must be > 0");
  if (!(options.deadband >= 0.0)) bad("deadband must be >= 0");
  if (!(options.new_energy_lag >= 0.0)) bad("new-energy lag must be >= 0");
  std::visit(overloaded{
                 [&](const StepDisturbance&) {},
                 [&](const RampDisturbance& r) {
                   if (!(r.duration >= 0.0)) bad("ramp duration must be >= 0");
                 },
                 [&](const ShortTermDisturbance& s) {
                   if (!(s.fault_duration > 0.0))
                     bad("fault duration must be > 0");
                   if (!(s.recovery_rate > 0.0))
                     bad("recovery rate must be > 0");
                 },
             },
             disturbance);
}

SimTrace simulate(const Scenario& s) {
  s.validate();
  const SystemParameters& p = s.params;
  const DerivedAggregates d = derive_aggregates(p);
  if (!(d.inertia_time_constant > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "simulation needs T_J > 0");
  }
  const double SN = p.base_power;
  const double fN = p.nominal_frequency;
  const Plant plant{d.inertia_time_constant,
                    p.load_damping,
                    p.new_energy_share * p.new_energy_gain,
                    p.droop,
                    p.hp_fraction,
                    p.reheat_time,
                    units::to_per_unit(p.pfr_capacity(), SN),
                    units::to_per_unit(s.options.deadband, fN),
                    s.options.new_energy_lag,
                    s.options.saturation};

  const auto breaks = disturbance_breakpoints(s.disturbance);
  const double h = s.dt_step;
  const auto steps = static_cast<std::size_t>(std::ceil(s.horizon / h - 1e-9));

  SimTrace tr;
  tr.times.reserve(steps + 1);
  tr.df.reserve(steps + 1);
  tr.p_mech.reserve(steps + 1);
  tr.p_dist.reserve(steps + 1);
  tr.p_load_damp.reserve(steps + 1);

  State st{0.0, 0.0, 0.0};
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.df.push_back(units::from_per_unit(st[0], fN));
    tr.p_mech.push_back(units::from_per_unit(plant.governor(st), SN));
    tr.p_dist.push_back(disturbance_power(s.disturbance, t));
    tr.p_load_damp.push_back(units::from_per_unit(plant.damping(st), SN));
    if (plant.saturation && !tr.pfr_saturated_at &&
        std::abs(plant.governor_raw(st)) >= plant.cap) {
      tr.pfr_saturated_at = t;
    }
  };
  auto advance = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double dt = b - a;
    auto f = [&](double t, const State& x) {
      return plant.rhs(x, units::to_per_unit(
                              piece_value(s.disturbance, t, mid), SN));
    };
    const State k1 = f(a, st);
    const State k2 = f(a + dt / 2, axpy(st, dt / 2, k1));
    const State k3 = f(a + dt / 2, axpy(st, dt / 2, k2));
    const State k4 = f(b, axpy(st, dt, k3));
    for (int i = 0; i < 3; ++i) {
      st[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  };

  record(0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double ta = static_cast<double>(i) * h;
    const double tb = std::min(static_cast<double>(i + 1) * h, s.horizon);
    double a = ta;
    for (double bp : breaks) {
      if (bp > a && bp < tb) {
        advance(a, bp);
        a = bp;
      }
    }
    advance(a, tb);
    record(tb);

    const double df = std::abs(tr.df.back());
    if (!std::isfinite(df) || df > s.options.divergence_limit) {
      std::ostringstream os;
      os << "integration diverged at t=" << tb << " s (|df|=" << df << " Hz)";
      throw Error(ErrorCode::UnstableIntegration, os.str());
    }
    if (s.options.stop_at && df >= *s.options.stop_at) break;
  }
  return tr;
}

std::optional<double> find_overlimit_time(const SimTrace& trace,
                                          double df_max) {
  const double t = first_crossing(trace.times, trace.df, df_max);
  if (t < 0.0) return std::nullopt;
  return t;
}

double balance_residual(const SimTrace& tr, const Scenario& s) {
  const SystemParameters& p = s.params;
  const DerivedAggregates d = derive_aggregates(p);
  const double SN = p.base_power;
  const double fN = p.nominal_frequency;
  const double cap_mw = p.pfr_capacity();
  const auto breaks = disturbance_breakpoints(s.disturbance);

  auto regime = [&](std::size_t i) {
    int r = 0;
    if (s.options.saturation && std::abs(tr.p_mech[i]) >= cap_mw * (1 - 1e-12))
      r |= 1;
    if (std::abs(tr.df[i]) <= s.options.deadband) r |= 2;
    return r;
  };

  double worst = 0.0;
  for (std::size_t i = 0; i + 2 < tr.size(); ++i) {
    const double ta = tr.times[i];
    const double tb = tr.times[i + 2];
    const double hh = tr.times[i + 1] - ta;
    if (std::abs((tb - tr.times[i + 1]) - hh) > 1e-9 * hh) continue;
    const bool crosses = std::any_of(breaks.begin(), breaks.end(), [&](double b) {
      return b >= ta && b <= tb;
    });
    if (crosses) continue;
    if (regime(i) != regime(i + 1) || regime(i + 1) != regime(i + 2)) continue;

    auto g = [&](std::size_t j) {
      return (tr.p_mech[j] - tr.p_dist[j] - tr.p_load_damp[j]) / SN;
    };
    const double lhs = d.inertia_time_constant * (tr.df[i + 2] - tr.df[i]) / fN;
    const double rhs = hh / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
    worst = std::max(worst, std::abs(lhs - rhs) / (tb - ta));
  }
  return worst;
}

ResponseSet synthesize_generator_responses(const SimTrace& trace,
                                           std::span<const double> weights,
                                           double nominal_frequency,
                                           const NoiseOptions& noise) {
  if (weights.empty()) {
    throw Error(ErrorCode::DegenerateWeights, "no generators to split over");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::DegenerateWeights,
                  "generator weights must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::DegenerateWeights, "generator weights sum to zero");
  }

  const std::size_t n = weights.size();
  const std::size_t samples = trace.size();
  ResponseSet r;
  r.times = trace.times;
  r.generator_ids.reserve(n);
  for (std::size_t g = 0; g < n; ++g) r.generator_ids.push_back("G" + std::to_string(g + 1));
  r.delta_pe.assign(n, std::vector<double>(samples, 0.0));
  r.frequency.assign(n, std::vector<double>(samples, 0.0));

  for (std::size_t i = 0; i < samples; ++i) {
    double assigned = 0.0;
    for (std::size_t g = 0; g + 1 < n; ++g) {
      const double v = trace.p_dist[i] * weights[g] / total;
      r.delta_pe[g][i] = v;
      assigned += v;
    }
    r.delta_pe[n - 1][i] = trace.p_dist[i] - assigned;
    for (std::size_t g = 0; g < n; ++g) {
      r.frequency[g][i] = nominal_frequency + trace.df[i];
    }
  }

  if (noise.sigma > 0.0) {
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> dist(0.0,
                                          noise.sigma / std::sqrt(double(n)));
    for (auto& series : r.delta_pe)
      for (auto& v : series) v += dist(rng);
  }
  return r;
}

ResponseSet synthesize_generator_responses(const SimTrace& trace,
                                           const NetworkSnapshot& snapshot,
                                           double nominal_frequency,
                                           const NoiseOptions& noise) {
  snapshot.validate();
  std::vector<double> w;
  w.reserve(snapshot.generators.size());
  for (const auto& g : snapshot.generators) {
    w.push_back(synchronizing_coefficient(snapshot.disturbance_voltage, g));
  }
  auto r = synthesize_generator_responses(trace, w, nominal_frequency, noise);
  for (std::size_t g = 0; g < w.size(); ++g) {
    r.generator_ids[g] = snapshot.generators[g].id;
  }
  return r;
}

NetworkSnapshot snapshot_for_power(NetworkSnapshot snapshot, double dP,
                                   double base_power) {
  snapshot.validate();
  double total = 0.0;
  for (const auto& g : snapshot.generators) {
    total += synchronizing_coefficient(snapshot.disturbance_voltage, g);
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::DegenerateWeights,
                "synchronizing coefficients sum to zero");
  }
  const double swing = units::to_per_unit(dP, base_power) / total;
  for (auto& g : snapshot.generators) g.angle_deviation = swing;
  return snapshot;
}

}  // namespace freqstab
