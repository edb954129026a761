#include <doctest.h>

#include <vector>

#include "gwrl/exp/stats.hpp"

using namespace gwrl;
using namespace gwrl::exp;

TEST_CASE("bootstrap of a constant vector is degenerate") {
  const std::vector<double> v{5, 5, 5, 5, 5};
  const auto ci = bootstrap_ci(v);
  CHECK(ci.mean == doctest::Approx(5.0));
  CHECK(ci.lo == doctest::Approx(5.0));
  CHECK(ci.hi == doctest::Approx(5.0));
}

TEST_CASE("two-element bootstrap matches exhaustive enumeration exactly") {
  // Resample means of {0,1}: {0, 0.5, 0.5, 1}. Linear-interpolation
  // percentiles at 2.5% / 97.5% of the sorted means:
  //   lo = 0 + 0.075 * 0.5 = 0.0375, hi = 0.5 + 0.925 * 0.5 = 0.9625.
  const std::vector<double> v{0, 1};
  const auto ci = bootstrap_ci(v, 0.95, 10000, 123);
  CHECK(ci.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ci.lo == doctest::Approx(0.0375).epsilon(1e-12));
  CHECK(ci.hi == doctest::Approx(0.9625).epsilon(1e-12));

  // Seed-independent: enumeration kicks in whenever n^n <= resamples.
  const auto ci2 = bootstrap_ci(v, 0.95, 10000, 999);
  CHECK(ci2.lo == ci.lo);
  CHECK(ci2.hi == ci.hi);
}

TEST_CASE("widening the level never narrows the interval") {
  const std::vector<double> v{-3.0, 1.0, 2.5, 4.0, 9.0, -1.0, 0.5};
  const auto c95 = bootstrap_ci(v, 0.95, 5000, 7);
  const auto c99 = bootstrap_ci(v, 0.99, 5000, 7);
  CHECK(c99.lo <= c95.lo);
  CHECK(c99.hi >= c95.hi);
}

TEST_CASE("bootstrap needs at least two values") {
  const std::vector<double> v{1.0};
  CHECK_THROWS_AS(bootstrap_ci(v), data::ConfigError);
}

TEST_CASE("random baselines are negative in both environments") {
  const auto ss = random_baseline(data::EnvId::simple_shapes, 1000, 0);
  CHECK(ss.mean < 0.0);
  CHECK(ss.ci.lo <= ss.mean);
  CHECK(ss.ci.hi >= ss.mean);
  CHECK(ss.returns.size() == 1000);

  const auto fac = random_baseline(data::EnvId::factory, 1000, 0);
  CHECK(fac.mean < 0.0);

  CHECK_THROWS_AS(random_baseline(data::EnvId::simple_shapes, 10, 0), data::ConfigError);
}

TEST_CASE("two baseline seeds agree within their joint interval") {
  const auto a = random_baseline(data::EnvId::simple_shapes, 2000, 1);
  const auto b = random_baseline(data::EnvId::simple_shapes, 2000, 2);
  CHECK(a.ci.lo <= b.ci.hi);
  CHECK(b.ci.lo <= a.ci.hi);
}

TEST_CASE("greedy oracle clearly beats random actions") {
  const auto oracle = greedy_oracle_baseline(1000, 3);
  const auto rand = random_baseline(data::EnvId::simple_shapes, 1000, 3);
  CHECK(oracle.mean > rand.mean + 1000.0);
  CHECK(oracle.mean < 0.0);
}

TEST_CASE("baseline subtraction maps the baseline itself to zero") {
  const auto b = random_baseline(data::EnvId::simple_shapes, 1000, 4);
  CHECK(b.mean - b.mean == 0.0);
}
