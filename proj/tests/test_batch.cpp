#include <doctest.h>

#include <random>
#include <vector>

#include "freqstab/batch.hpp"
#include "freqstab/errors.hpp"
#include "support.hpp"

using namespace freqstab;

namespace {

std::vector<Scenario> mixed_batch(std::size_t n) {
  const auto base = testing::bundled("csee-fs-low-freq").scenario;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto s = testing::linearised(base);
    s.horizon = 8.0;
    s.params.inertia = 1.0 + 4.0 * u(rng);
    if (i % 2 == 0) {
      s.disturbance = StepDisturbance{50.0 + 500.0 * u(rng), 0.5};
    } else {
      s.disturbance = RampDisturbance{5.0 + 100.0 * u(rng), 0.5, 4.0};
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_SUITE("batch") {

TEST_CASE("parallel simulation equals the serial loop") {
  const auto batch = mixed_batch(12);
  const auto par = simulate_all(batch);
  const auto ser = simulate_all_serial(batch);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].df == ser[i].df);
    CHECK(par[i].p_mech == ser[i].p_mech);
  }
}

TEST_CASE("parallel oracle deviations equal the serial loop") {
  const auto batch = mixed_batch(10);
  const auto par = sfr_oracle_deviations(batch);
  const auto ser = sfr_oracle_deviations_serial(batch);
  CHECK(par == ser);
  for (double d : par) CHECK(d < 1e-4);
}

TEST_CASE("oracle comparison refuses the nonlinear plant") {
  const auto s = testing::bundled("csee-fs-low-freq").scenario;
  CHECK_THROWS_AS(sfr_oracle_deviation(s), Error);
  auto t = testing::linearised(s);
  t.disturbance = ShortTermDisturbance{100.0, 1.0, 0.5, 1000.0};
  CHECK_THROWS_AS(sfr_oracle_deviation(t), Error);
}

TEST_CASE("the first failing scenario is rethrown") {
  auto batch = mixed_batch(6);
  batch[2].dt_step = 0.0;
  batch[4].horizon = 0.0;
  try {
    simulate_all(batch);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("dt_step") != std::string::npos);
  }
}

TEST_CASE("empty batch") {
  CHECK(simulate_all({}).empty());
  CHECK(sfr_oracle_deviations({}).empty());
}

}  // TEST_SUITE
