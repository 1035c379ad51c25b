#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "freqstab/assessor.hpp"
#include "freqstab/batch.hpp"
#include "freqstab/classifier.hpp"
#include "freqstab/estimator.hpp"
#include "freqstab/pipeline.hpp"
#include "freqstab/sfr.hpp"
#include "support.hpp"

using namespace freqstab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const ScenarioFile& base() {
  static const ScenarioFile f = testing::bundled("csee-fs-low-freq");
  return f;
}

Outcome margins() {
  const double dP0[] = {350.0, 520.0, 690.0};
  const double expected[] = {3.53, -43.33, -90.19};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(100.0 * safety_margin(362.8, dP0[i]) - expected[i]));
  }
  return {worst <= 0.01, fmt("eta within %.4f percentage points", worst)};
}

Outcome steady_state_criticals() {
  const auto& p = base().scenario.params;
  const auto& th = base().thresholds;
  const auto ss = step_critical_power_ss(p, th.steady_state_limit);
  const double tr = step_critical_power_transient(
      derive_sfr(p, derive_aggregates(p)), p, th.transient_limit);
  const double e = std::max({std::abs(ss.dP_max1 / 398.8 - 1.0),
                             std::abs(ss.dP_max2 / 362.8 - 1.0),
                             std::abs(tr / 647.6 - 1.0)});
  std::ostringstream os;
  os << "dP_max1=" << ss.dP_max1 << " dP_max2=" << ss.dP_max2
     << " dP_max3=" << tr << " MW, worst error " << 100.0 * e << "%";
  return {e <= 1e-3, os.str()};
}

const Tables& tables() {
  static const Tables t = reproduce_tables(FREQSTAB_SCENARIO_DIR);
  return t;
}

Outcome over_limit(const OverLimitRow& r) {
  const double e = std::abs(r.relative_error);
  return {e <= 0.05, fmt("t_m analytic %.3f s, simulated %.3f s, error %.2f%%",
                         r.analytic_t_m, r.simulated_t_m, 100.0 * e)};
}

Outcome sfr_oracle() {
  // Ten damping-ratio bins across (0.2, 1.8), ten parameter sets each.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Scenario> batch;
  int filled[10] = {};
  double zmin = 10.0, zmax = 0.0;
  for (int draw = 0; batch.size() < 100; ++draw) {
    if (draw > 1000000) return {false, "could not cover the damping range"};
    auto s = testing::linearised(base().scenario);
    s.params.inertia = 0.5 + 11.5 * u(rng);
    s.params.reheat_time = 2.0 + 12.0 * u(rng);
    s.params.hp_fraction = 0.02 + 0.58 * u(rng);
    s.params.droop = 0.03 + 0.05 * u(rng);
    s.params.load_damping = 0.1 + 1.9 * u(rng);
    s.params.new_energy_gain = 3.0 * u(rng);
    const auto sfr = derive_sfr(s.params, derive_aggregates(s.params));
    if (!(sfr.zeta > 0.2 && sfr.zeta < 1.8)) continue;
    const auto bin = static_cast<int>((sfr.zeta - 0.2) / 0.16);
    if (filled[bin] == 10) continue;
    ++filled[bin];
    zmin = std::min(zmin, sfr.zeta);
    zmax = std::max(zmax, sfr.zeta);
    s.horizon = 30.0;
    if (batch.size() % 2 == 0) {
      s.disturbance = StepDisturbance{100.0 + 600.0 * u(rng), 1.0};
    } else {
      s.disturbance = RampDisturbance{10.0 + 90.0 * u(rng), 1.0, 5.0 + 15.0 * u(rng)};
    }
    s.options.divergence_limit = 1e3;
    batch.push_back(s);
  }
  const auto dev = sfr_oracle_deviations(batch);
  const double worst = *std::max_element(dev.begin(), dev.end());
  const double limit = 0.005 * base().thresholds.transient_limit;
  return {worst <= limit,
          fmt("max deviation %.2e Hz over zeta %.2f-%.2f", worst, zmin, zmax) +
              fmt(" (limit %.5f Hz)", limit)};
}

struct Case {
  DisturbanceLabel expected;
  Scenario scenario;
};

std::vector<Case> classifier_cases() {
  const auto& f = base();
  const auto& p = f.scenario.params;
  const double k1 = f.thresholds.critical_slope;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Case> out;
  auto make = [&](DisturbanceLabel l, Disturbance d, double horizon) {
    Scenario s = f.scenario;
    s.disturbance = d;
    s.horizon = horizon;
    out.push_back({l, s});
  };
  const double budget = minute_slope_at_threshold(p, f.thresholds.frequency_threshold, 1.0);
  for (int i = 0; i < 25; ++i) {
    make(DisturbanceLabel::Step, StepDisturbance{20.0 + 980.0 * u(rng), 1.0}, 3.0);
  }
  for (int i = 0; i < 25; ++i) {
    const double dP = 100.0 + 1400.0 * u(rng);
    const double fault = 0.1 + 0.7 * u(rng);
    make(DisturbanceLabel::ShortTerm,
         ShortTermDisturbance{dP, 1.0, fault, p.recovery_rate},
         1.0 + fault + dP / p.recovery_rate + 2.0);
  }
  for (int i = 0; i < 25; ++i) {
    // (k1, 30 k1]
    const double k = k1 * (30.0 - 29.0 * u(rng));
    make(DisturbanceLabel::SecondSlope, RampDisturbance{k, 1.0, 100.0}, 3.0);
  }
  for (int i = 0; i < 25; ++i) {
    const double k = k1 * std::exp(std::log(0.05) * u(rng));
    const double horizon = 1.0 + 3.0 * budget / k + 60.0;
    make(DisturbanceLabel::MinuteSlope, RampDisturbance{k, 1.0, horizon}, horizon);
    out.back().scenario.dt_step = 0.01;
    out.back().scenario.options.stop_at = 1.1 * f.thresholds.frequency_threshold;
  }
  return out;
}

std::string label_name(const std::optional<DisturbanceEstimate>& e) {
  return e ? to_string(e->label) : "none";
}

double accuracy(const std::vector<Case>& cases, const std::vector<SimTrace>& traces,
                double sigma, std::string& misses) {
  int right = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    ScenarioFile f = base();
    f.scenario = cases[i].scenario;
    std::optional<DisturbanceEstimate> est;
    std::string got;
    try {
      const auto r = synthesize_measurements(f, traces[i], sigma, 1000 + i);
      const auto df = inertial_center_deviation(r, {}, f.scenario.params.nominal_frequency);
      est = classify(total_disturbance_power(r), df, f.thresholds, f.scenario.params);
      got = label_name(est);
    } catch (const Error& e) {
      got = std::string("error: ") + e.what();
    }
    if (est && est->label == cases[i].expected) {
      ++right;
    } else {
      misses += " [" + std::string(to_string(cases[i].expected)) + " #" +
                std::to_string(i % 25) + " -> " + got + "]";
    }
  }
  return static_cast<double>(right) / static_cast<double>(cases.size());
}

Outcome classifier_exactness() {
  const auto cases = classifier_cases();
  std::vector<Scenario> scenarios;
  for (const auto& c : cases) scenarios.push_back(c.scenario);
  const auto traces = simulate_all(scenarios);
  std::string clean_misses, noisy_misses;
  const double clean = accuracy(cases, traces, 0.0, clean_misses);
  const double noisy = accuracy(cases, traces, 1.0, noisy_misses);
  Outcome o{clean == 1.0 && noisy >= 0.95,
            fmt("noise-free %.0f%%, sigma=1 MW %.0f%%", 100 * clean, 100 * noisy)};
  if (!clean_misses.empty()) o.detail += "; noise-free misses:" + clean_misses;
  if (!noisy_misses.empty()) o.detail += "; noisy misses:" + noisy_misses;
  return o;
}

Outcome estimator_round_trip() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& f = base();
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Scenario s = f.scenario;
    const double dP0 = 50.0 + 950.0 * u(rng);
    s.disturbance = StepDisturbance{dP0, 1.0};
    s.horizon = 3.0;
    std::vector<double> w(2 + k % 9);
    for (auto& x : w) x = 0.05 + u(rng);
    const auto r =
        synthesize_generator_responses(decimate(simulate(s), 10), w, 50.0);
    const auto est = classify(total_disturbance_power(r),
                              inertial_center_deviation(r, {}, 50.0), f.thresholds,
                              s.params);
    if (!est || !est->dP0) return {false, fmt("no estimate for %.1f MW", dP0)};
    worst = std::max(worst, std::abs(*est->dP0 / dP0 - 1.0));
  }
  return {worst <= 0.01, fmt("worst relative error %.2e over 50 weight vectors", worst)};
}

Outcome short_term_quadratic() {
  const auto& t = tables();
  double residual = 0.0;
  for (const auto& r : t.short_term) residual = std::max(residual, std::abs(r.residual_pu));

  auto p = testing::bundled("short-term").scenario.params;
  p.load_damping = 0.0;
  p.recovery_rate = 1e7;
  const auto d = derive_aggregates(p);
  const double dt = 0.5, df = 0.75;
  const double limit = 4.0 * d.effective_inertia * (df / p.nominal_frequency) *
                       p.generation_base() / dt;
  const double lim_err = std::abs(short_term_critical_power(p, d, dt, df) / limit - 1.0);

  const double expected[] = {1380.2, 1253.8, 1143.8};
  double table_err = 0.0;
  bool decreasing = true;
  for (std::size_t i = 0; i < 3; ++i) {
    table_err = std::max(table_err,
                         std::abs(t.short_term[i].critical_power / expected[i] - 1.0));
    if (i > 0 && !(t.short_term[i].critical_power < t.short_term[i - 1].critical_power))
      decreasing = false;
  }
  std::ostringstream os;
  os << "residual " << residual << " pu, limiting case error " << 100 * lim_err
     << "%, critical powers " << t.short_term[0].critical_power << " > "
     << t.short_term[1].critical_power << " > " << t.short_term[2].critical_power
     << " MW (worst " << 100 * table_err << "%)";
  return {residual < 1e-6 && lim_err <= 0.01 && decreasing && table_err <= 0.01,
          os.str()};
}

Outcome threshold_example() {
  SystemParameters p;
  p.nominal_frequency = 50.0;
  p.base_power = 1000.0;
  p.droop = 0.05;
  p.new_energy_gain = 10.0;
  p.generator_pfr_fraction = 0.06;
  p.new_energy_pfr_fraction = 0.1;
  p.conventional_capacity = 1000.0;
  p.new_energy_capacity = 1000.0;
  const double dP = compute_power_threshold(3.0, 0.5);
  const double df = compute_frequency_threshold(p, 0.033);
  // Quoted to one decimal place.
  const bool ok = std::abs(dP - 1.5) < 1e-12 && std::round(df * 10.0) / 10.0 == 0.3;
  return {ok, fmt("dP_sh = %.4f MW, df_sh = %.5f Hz (0.3 Hz to one decimal)",
                  dP, df)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"safety margin arithmetic", margins},
      {"steady-state and transient critical powers", steady_state_criticals},
      {"second-level ramp over-limit time", [] { return over_limit(tables().second_slope); }},
      {"minute-level ramp over-limit time", [] { return over_limit(tables().minute_slope); }},
      {"closed-form response vs simulation", sfr_oracle},
      {"disturbance classification", classifier_exactness},
      {"disturbance power round trip", estimator_round_trip},
      {"short-term critical power", short_term_quadratic},
      {"threshold example", threshold_example},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
  }
  return failed == 0 ? 0 : 1;
}
