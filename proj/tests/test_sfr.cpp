#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "freqstab/errors.hpp"
#include "freqstab/sfr.hpp"
#include "support.hpp"

using namespace freqstab;

namespace {

SystemParameters benchmark() { return testing::bundled("csee-fs-low-freq").scenario.params; }

// Parameter set with the requested reheat time and inertia; other values
// from the benchmark grid.
SystemParameters with(double H, double T_R, double F_H, double R) {
  auto p = benchmark();
  p.inertia = H;
  p.reheat_time = T_R;
  p.hp_fraction = F_H;
  p.droop = R;
  return p;
}

SfrDerived sfr_of(const SystemParameters& p) {
  return derive_sfr(p, derive_aggregates(p));
}

}  // namespace

TEST_SUITE("sfr") {

TEST_CASE("mode time constants are the roots of the characteristic polynomial") {
  for (const auto& p : {benchmark(), with(4.0, 8.0, 0.3, 0.05),
                        with(6.0, 6.0, 0.2, 0.04), with(0.8, 12.0, 0.5, 0.06)}) {
    const auto s = sfr_of(p);
    const auto prod = s.T1 * s.T2 * s.omega_n * s.omega_n;
    const auto sum = (s.T1 + s.T2) * s.omega_n / (2.0 * s.zeta);
    CHECK(prod.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(prod.imag()) < 1e-12);
    CHECK(sum.real() == doctest::Approx(1.0).epsilon(1e-12));
    const double TR = p.reheat_time;
    CHECK(std::abs(s.kc1 - (s.T1 * s.T1 - TR * s.T1) / (s.T1 - s.T2)) < 1e-12);
    CHECK(std::abs(s.kc2 - (s.T2 * s.T2 - TR * s.T2) / (s.T2 - s.T1)) < 1e-12);
  }
}

TEST_CASE("benchmark natural frequency and damping") {
  const auto s = sfr_of(benchmark());
  // omega_n^2 = (3*0.05 + 1) / (2*1.34*0.05*10) = 1.15 / 1.34.
  CHECK(s.omega_n == doctest::Approx(std::sqrt(1.15 / 1.34)).epsilon(1e-12));
  CHECK(s.omega_n == doctest::Approx(0.926).epsilon(1e-3));
  CHECK(s.zeta > 1.0);
}

TEST_CASE("damping ratio without a high-pressure stage") {
  auto p = benchmark();
  p.hp_fraction = 0.0;
  const auto s = sfr_of(p);
  const double K = 3.0, R = 0.05, H = 1.34, TR = 10.0;
  CHECK(s.zeta == doctest::Approx(s.omega_n * (2 * H * R + K * R * TR) /
                                  (2 * (K * R + 1)))
                      .epsilon(1e-12));
}

TEST_CASE("nonpositive inputs are rejected") {
  auto p = benchmark();
  auto d = derive_aggregates(p);
  d.effective_inertia = 0.0;
  CHECK_THROWS_AS(derive_sfr(p, d), Error);
}

TEST_CASE("ramp response is real for conjugate and real mode pairs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int under = 0, over = 0;
  for (int k = 0; k < 200; ++k) {
    const auto p = with(0.5 + 8 * u(rng), 2 + 12 * u(rng), u(rng),
                        0.02 + 0.08 * u(rng));
    const auto s = sfr_of(p);
    if (!(s.zeta > 0.0 && s.zeta < 2.0)) continue;
    (s.zeta < 1.0 ? under : over)++;
    for (double t = 0.05; t <= 100.0; t += 0.37) {
      const auto v = ramp_shape(s, t);
      CHECK(std::abs(v.imag()) < 1e-9 * std::abs(v.real()));
    }
  }
  CHECK(under > 20);
  CHECK(over > 20);
}

TEST_CASE("critical damping is nudged off the double root") {
  // Solve F_H for zeta = 1 with the other parameters fixed.
  auto p = with(4.0, 8.0, 0.0, 0.05);
  const auto s0 = sfr_of(p);
  const double K = derive_aggregates(p).effective_damping;
  p.hp_fraction = (2 * (K * p.droop + 1) / s0.omega_n - 2 * 4.0 * p.droop) /
                      p.reheat_time -
                  K * p.droop;
  REQUIRE(p.hp_fraction > 0.0);
  REQUIRE(p.hp_fraction < 1.0);
  const auto s = sfr_of(p);
  CHECK(std::isfinite(std::abs(s.kc1)));
  CHECK(std::isfinite(ramp_response(s, p, 10.0, 5.0)));
  CHECK(std::isfinite(step_nadir(s, p, 100.0).deviation));
}

TEST_CASE("ramp response starts at zero and becomes linear") {
  for (const auto& p : {benchmark(), with(4.0, 8.0, 0.3, 0.05)}) {
    const auto s = sfr_of(p);
    CHECK(std::abs(ramp_response(s, p, 60.0, 0.0)) < 1e-12);
    const double slope =
        (ramp_response(s, p, 60.0, 301.0) - ramp_response(s, p, 60.0, 300.0));
    const double expect = -60.0 / p.base_power * s.gain * p.nominal_frequency;
    CHECK(slope == doctest::Approx(expect).epsilon(1e-9));
  }
  const auto p = benchmark();
  CHECK_THROWS_AS(ramp_response(sfr_of(p), p, 60.0, -1.0), Error);
}

TEST_CASE("step response agrees with an independent integration") {
  for (const auto& p : {benchmark(), with(4.0, 8.0, 0.3, 0.05),
                        with(6.0, 5.0, 0.15, 0.04)}) {
    const auto s = sfr_of(p);
    const auto d = derive_aggregates(p);
    const double dp = 300.0;
    const double dt = 1e-3;
    const auto ref = testing::linear_loop(
        d.effective_inertia, d.effective_damping, p.droop, p.hp_fraction,
        p.reheat_time, [&](double) { return dp / p.base_power; }, 40.0, dt);
    double worst = 0.0;
    for (std::size_t i = 1; i < ref.size(); i += 10) {
      const double t = static_cast<double>(i) * dt;
      worst = std::max(worst, std::abs(step_response(s, p, dp, t) -
                                       ref[i] * p.nominal_frequency));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("nadir is the maximum of the step response") {
  for (const auto& p : {benchmark(), with(4.0, 8.0, 0.3, 0.05),
                        with(6.0, 5.0, 0.15, 0.04), with(2.0, 7.0, 0.25, 0.05)}) {
    const auto s = sfr_of(p);
    const auto n = step_nadir(s, p, 250.0);
    REQUIRE(std::isfinite(n.time));
    // Brute-force scan for the deepest point.
    double best = 0.0, best_t = 0.0;
    for (double t = 0.0; t < 60.0; t += 1e-3) {
      const double v = step_response(s, p, 250.0, t);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    CHECK(n.deviation == doctest::Approx(best).epsilon(1e-6));
    CHECK(n.time == doctest::Approx(best_t).epsilon(1e-3));
    for (double delta : {1e-3, 1e-2}) {
      CHECK(std::abs(step_response(s, p, 250.0, n.time - delta)) <
            std::abs(n.deviation));
      CHECK(std::abs(step_response(s, p, 250.0, n.time + delta)) <
            std::abs(n.deviation));
    }
  }
}

TEST_CASE("underdamped nadir follows the damped-oscillation form") {
  const auto p = with(4.0, 8.0, 0.1, 0.05);
  const auto s = sfr_of(p);
  REQUIRE(s.zeta < 1.0);
  const double wr = s.omega_n * std::sqrt(1 - s.zeta * s.zeta);
  double tm = std::atan(wr * p.reheat_time /
                        (s.zeta * s.omega_n * p.reheat_time - 1.0)) / wr;
  if (tm < 0.0) tm += M_PI / wr;
  CHECK(step_nadir_time(s) == doctest::Approx(tm).epsilon(1e-12));
}

TEST_CASE("monotone step response has no interior nadir") {
  // Reheat faster than the slow mode: the deviation only settles.
  auto p = with(20.0, 0.2, 0.3, 0.05);
  const auto s = sfr_of(p);
  REQUIRE(s.zeta > 1.0);
  REQUIRE(s.T1.real() >= p.reheat_time);
  CHECK(std::isinf(step_nadir_time(s)));
  CHECK(step_overshoot_factor(s) == 1.0);
}

TEST_CASE("nadir is linear in the step size") {
  const auto p = benchmark();
  const auto s = sfr_of(p);
  const double a = step_nadir(s, p, 100.0).deviation;
  CHECK(step_nadir(s, p, 1e-6).deviation == doctest::Approx(a * 1e-8));
  CHECK(step_nadir(s, p, 350.0).deviation == doctest::Approx(3.5 * a));
  CHECK_THROWS_AS(step_nadir(s, p, 0.0), Error);
}

TEST_CASE("over-limit time of the calibrated 60 MW/s ramp") {
  const auto p = testing::bundled("ramp-60").scenario.params;
  const auto s = sfr_of(p);
  const double tm = ramp_overlimit_time(s, p, 60.0, 0.75);
  CHECK(tm == doctest::Approx(13.13).epsilon(1e-3));
  CHECK(std::abs(std::abs(ramp_response(s, p, 60.0, tm)) - 0.75) < 1e-6);
}

TEST_CASE("over-limit time satisfies the transcendental balance") {
  const auto p = benchmark();
  const auto s = sfr_of(p);
  for (double k : {20.0, 60.0, 200.0}) {
    const double tm = ramp_overlimit_time(s, p, k, 0.75);
    const double lhs = 0.75 / 50.0 / (k / p.base_power * s.gain) -
                       (p.reheat_time - s.T1 - s.T2).real();
    const double rhs = (tm + s.kc1 * std::exp(-tm / s.T1) +
                        s.kc2 * std::exp(-tm / s.T2))
                           .real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("over-limit time monotonicity") {
  const auto p = benchmark();
  const auto s = sfr_of(p);
  double prev = 1e300;
  for (double k : {5.0, 10.0, 30.0, 60.0, 120.0, 500.0}) {
    const double tm = ramp_overlimit_time(s, p, k, 0.75);
    CHECK(tm < prev);
    prev = tm;
  }
  prev = 0.0;
  for (double lim : {0.2, 0.5, 0.75, 1.0}) {
    const double tm = ramp_overlimit_time(s, p, 60.0, lim);
    CHECK(tm > prev);
    prev = tm;
  }
}

TEST_CASE("doubling a slow ramp roughly halves the over-limit time") {
  const auto p = benchmark();
  const auto s = sfr_of(p);
  const double slow = ramp_overlimit_time(s, p, 3.0, 0.75);
  REQUIRE(slow > 5.0 * p.reheat_time);
  const double fast = ramp_overlimit_time(s, p, 6.0, 0.75);
  CHECK(fast == doctest::Approx(slow / 2.0).epsilon(0.1));
}

TEST_CASE("over-limit preconditions") {
  const auto p = benchmark();
  const auto s = sfr_of(p);
  CHECK_THROWS_AS(ramp_overlimit_time(s, p, 0.0, 0.75), Error);
  CHECK_THROWS_AS(ramp_overlimit_time(s, p, 10.0, 0.0), Error);
}

}  // TEST_SUITE
