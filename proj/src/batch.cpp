#include "freqstab/batch.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <variant>

#include "freqstab/errors.hpp"
#include "freqstab/sfr.hpp"

namespace freqstab {

namespace {

// OpenMP regions must not leak exceptions; keep the first one per slot and
// rethrow the lowest-index failure so behaviour matches the serial loop.
template <class Out, class F>
std::vector<Out> parallel_map(std::span<const Scenario> in, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  std::vector<Out> out(in.size());
  std::vector<std::exception_ptr> errors(in.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = f(in[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

std::vector<SimTrace> simulate_all(std::span<const Scenario> scenarios) {
  return parallel_map<SimTrace>(scenarios,
                                [](const Scenario& s) { return simulate(s); });
}

std::vector<SimTrace> simulate_all_serial(std::span<const Scenario> scenarios) {
  std::vector<SimTrace> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(simulate(s));
  return out;
}

double sfr_oracle_deviation(const Scenario& s) {
  if (s.options.saturation || s.options.deadband != 0.0 ||
      s.options.new_energy_lag != 0.0) {
    throw Error(ErrorCode::InvalidParameter,
                "closed-form comparison needs saturation, deadband and "
                "new-energy lag disabled");
  }
  const SfrDerived sfr = derive_sfr(s.params, derive_aggregates(s.params));
  auto closed_form = [&](double t) -> double {
    if (const auto* st = std::get_if<StepDisturbance>(&s.disturbance)) {
      return step_response(sfr, s.params, st->dP0, t - st->t0);
    }
    if (const auto* r = std::get_if<RampDisturbance>(&s.disturbance)) {
      if (t <= r->t0) return 0.0;
      const double tau = t - r->t0;
      // A finite ramp is the difference of two unbounded ones.
      double v = ramp_response(sfr, s.params, r->k, tau);
      if (tau > r->duration)
        v -= ramp_response(sfr, s.params, r->k, tau - r->duration);
      return v;
    }
    throw Error(ErrorCode::InvalidParameter,
                "closed-form comparison covers step and ramp scenarios only");
  };

  const SimTrace tr = simulate(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    worst = std::max(worst, std::abs(tr.df[i] - closed_form(tr.times[i])));
  }
  return worst;
}

std::vector<double> sfr_oracle_deviations(std::span<const Scenario> scenarios) {
  return parallel_map<double>(scenarios, sfr_oracle_deviation);
}

std::vector<double> sfr_oracle_deviations_serial(
    std::span<const Scenario> scenarios) {
  std::vector<double> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(sfr_oracle_deviation(s));
  return out;
}

}  // namespace freqstab
