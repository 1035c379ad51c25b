#pragma once

#include <string>

#include "freqstab/io.hpp"

namespace testing {

inline freqstab::ScenarioFile bundled(const std::string& name) {
  return freqstab::load_scenario(std::string(FREQSTAB_SCENARIO_DIR) + "/" +
                                 name + ".json");
}

// Linear plant: no clamp, no deadband, damping acts instantly.
inline freqstab::Scenario linearised(freqstab::Scenario s) {
  s.options.saturation = false;
  s.options.deadband = 0.0;
  s.options.new_energy_lag = 0.0;
  return s;
}

}  // namespace testing

#include <functional>
#include <vector>

namespace testing {

// Independent reference for the linear governor loop: explicit midpoint on
// the two-state model, in per unit. Kept deliberately different from the
// library's integrator.
inline std::vector<double> linear_loop(double H_sys, double K, double R,
                                       double F_H, double T_R,
                                       const std::function<double(double)>& dist_pu,
                                       double horizon, double dt) {
  std::vector<double> out{0.0};
  double x = 0.0, y = 0.0;
  auto fx = [&](double t, double xx, double yy) {
    const double u = -xx / R;
    return (F_H * u + (1.0 - F_H) * yy - dist_pu(t) - K * xx) / (2.0 * H_sys);
  };
  auto fy = [&](double xx, double yy) { return (-xx / R - yy) / T_R; };
  const auto steps = static_cast<long>(horizon / dt + 0.5);
  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double xm = x + 0.5 * dt * fx(t, x, y);
    const double ym = y + 0.5 * dt * fy(x, y);
    x += dt * fx(t + 0.5 * dt, xm, ym);
    y += dt * fy(xm, ym);
    out.push_back(x);
  }
  return out;
}

}  // namespace testing
