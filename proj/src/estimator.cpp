#include "freqstab/estimator.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "freqstab/errors.hpp"
#include "freqstab/units.hpp"

namespace freqstab {

void ResponseSet::validate() const {
  if (delta_pe.size() != generator_ids.size()) {
    throw Error(ErrorCode::InvalidParameter,
                "response set: one power series per generator id required");
  }
  if (!frequency.empty() && frequency.size() != generator_ids.size()) {
    throw Error(ErrorCode::InvalidParameter,
                "response set: frequency series must match generator count");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      std::ostringstream os;
      os << "response set: sample times not strictly increasing at index "
         << i;
      throw Error(ErrorCode::InvalidParameter, os.str());
    }
  }
  auto check = [&](const std::vector<std::vector<double>>& all) {
    for (std::size_t g = 0; g < all.size(); ++g) {
      if (all[g].size() != times.size()) {
        throw Error(ErrorCode::InvalidParameter,
                    "response set: series for '" + generator_ids[g] +
                        "' has the wrong length");
      }
    }
  };
  check(delta_pe);
  check(frequency);
}

void NetworkSnapshot::validate() const {
  if (!(disturbance_voltage > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "snapshot: U_p must be > 0");
  }
  for (const auto& g : generators) {
    if (!(g.internal_voltage > 0.0)) {
      throw Error(ErrorCode::InvalidParameter,
                  "snapshot: E_i must be > 0 for generator '" + g.id + "'");
    }
  }
}

double synchronizing_coefficient(double disturbance_voltage,
                                 const GeneratorCoupling& g) {
  return disturbance_voltage * g.internal_voltage * g.susceptance *
         std::cos(g.angle);
}

PowerSample disturbance_power_from_pe(const ResponseSet& r, double t) {
  if (r.generator_count() == 0) return {0.0, true};
  if (r.times.empty() || t < r.times.front() || t > r.times.back()) {
    std::ostringstream os;
    os << "disturbance power: t=" << t << " outside the sampled range";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  double total = 0.0;
  for (const auto& series : r.delta_pe) total += interpolate(r.times, series, t);
  return {total, false};
}

TimeSeries total_disturbance_power(const ResponseSet& r) {
  TimeSeries out;
  out.times = r.times;
  out.values.assign(r.times.size(), 0.0);
  for (const auto& series : r.delta_pe) {
    for (std::size_t i = 0; i < series.size(); ++i) out.values[i] += series[i];
  }
  return out;
}

double disturbance_power_from_network(const NetworkSnapshot& s,
                                      double base_power) {
  s.validate();
  double total_pu = 0.0;
  for (const auto& g : s.generators) {
    total_pu += synchronizing_coefficient(s.disturbance_voltage, g) *
                g.angle_deviation;
  }
  return units::from_per_unit(total_pu, base_power);
}

double LineFit::residual_ratio() const {
  if (constant_ss <= 0.0) return 1.0;
  return residual_ss / constant_ss;
}

LineFit fit_line(std::span<const double> times, std::span<const double> values) {
  const std::size_t n = times.size();
  if (n < 3 || values.size() != n) {
    throw Error(ErrorCode::InsufficientSamples,
                "line fit needs at least 3 samples");
  }
  const double t_mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  const double y_mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = times[i] - t_mean;
    const double dy = values[i] - y_mean;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  LineFit fit;
  fit.samples = n;
  fit.slope = stt > 0.0 ? sty / stt : 0.0;
  fit.intercept = y_mean - fit.slope * t_mean;
  fit.constant_ss = syy;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = values[i] - (y_mean + fit.slope * (times[i] - t_mean));
    rss += e * e;
  }
  fit.residual_ss = rss;
  return fit;
}

LineFit slope_estimate(const ResponseSet& r, double t_a, double t_b) {
  const TimeSeries total = total_disturbance_power(r);
  const auto [first, last] = total.index_range(t_a, t_b);
  if (last < first + 3) {
    throw Error(ErrorCode::InsufficientSamples,
                "slope estimate: window holds fewer than 3 samples");
  }
  return fit_line(std::span(total.times).subspan(first, last - first),
                  std::span(total.values).subspan(first, last - first));
}

double minute_slope_at_threshold(const SystemParameters& p, double df_sh,
                                 double t1) {
  if (!(t1 > 0.0)) {
    throw Error(ErrorCode::InvalidParameter,
                "minute slope: t1 must be positive");
  }
  const double df_pu = units::to_per_unit(df_sh, p.nominal_frequency);
  const double load_relief = p.load_damping * df_pu * p.initial_load;
  return (load_relief + p.pfr_capacity()) / t1;
}

TimeSeries inertial_center_deviation(const ResponseSet& r,
                                     std::span<const double> weights,
                                     double nominal_frequency) {
  if (!r.has_frequency()) {
    throw Error(ErrorCode::InvalidParameter,
                "response set carries no frequency measurements");
  }
  const std::size_t g_count = r.generator_count();
  std::vector<double> w(g_count, 1.0);
  if (!weights.empty()) {
    if (weights.size() != g_count) {
      throw Error(ErrorCode::InvalidParameter,
                  "inertia weights must match generator count");
    }
    w.assign(weights.begin(), weights.end());
  }
  const double w_sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(w_sum > 0.0)) {
    throw Error(ErrorCode::DegenerateWeights, "inertia weights sum to zero");
  }
  TimeSeries out;
  out.times = r.times;
  out.values.assign(r.times.size(), 0.0);
  for (std::size_t g = 0; g < g_count; ++g) {
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      out.values[i] += w[g] * r.frequency[g][i];
    }
  }
  for (auto& v : out.values) v = v / w_sum - nominal_frequency;
  return out;
}

}  // namespace freqstab
