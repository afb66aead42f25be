#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "crnbatch/errors.hpp"
#include "crnbatch/random.hpp"
#include "crnbatch/validation.hpp"

using namespace crnbatch;

TEST_CASE("histograms") {
  Histogram one = endpoint_histogram([](std::uint64_t) { return std::int64_t{7}; }, 1);
  CHECK(one == Histogram{{7, 1}});
  auto runner = [](std::uint64_t i) {
    Rng rng(3, 0, i);
    return static_cast<std::int64_t>(rng.binomial(20, 0.3));
  };
  CHECK(endpoint_histogram(runner, 5000, 1) == endpoint_histogram(runner, 5000, 3));
  CHECK(histogram_total(endpoint_histogram(runner, 5000, 2)) == 5000);
  CHECK_THROWS_AS(endpoint_histogram(runner, 0), InvalidParams);
  CHECK_THROWS(endpoint_histogram([](std::uint64_t i) -> std::int64_t { throw Terminal(std::to_string(i)); }, 10, 2));
}

TEST_CASE("distances") {
  Histogram a{{1, 10}, {2, 30}}, b{{5, 3}};
  CHECK(tvd(a, a) == 0.0);
  CHECK(tvd(a, b) == 1.0);
  CHECK(ks_statistic(a, a) == 0.0);
  CHECK(ks_statistic(a, b) == 1.0);
  CHECK(tvd(Histogram{{0, 1}, {1, 1}}, Histogram{{0, 1}}) == doctest::Approx(0.5));
  CHECK(histogram_mean(a) == doctest::Approx(1.75));
  CHECK_THROWS_AS(tvd(a, Histogram{}), DegenerateBins);
  CHECK_THROWS_AS(chisq_compare(Histogram{}, a), DegenerateBins);
}

TEST_CASE("chi-square") {
  Histogram a{{0, 500}, {1, 500}};
  ChiSquareResult same = chisq_compare(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0));
  Histogram b{{0, 600}, {1, 400}};
  ChiSquareResult diff = chisq_compare(a, b);
  CHECK(diff.dof == 1);
  CHECK(diff.statistic == doctest::Approx(20.2020).epsilon(1e-3));
  CHECK(diff.p_value < 1e-4);
  // sparse tails are merged
  Histogram c{{0, 100}, {1, 100}, {2, 2}, {3, 1}}, d{{0, 100}, {1, 100}, {2, 1}, {4, 1}};
  CHECK(chisq_compare(c, d).bins == 2);
  CHECK(chisq_goodness(Histogram{{0, 50}, {1, 50}}, {{0, 0.5}, {1, 0.5}}).p_value == doctest::Approx(1.0));
}

TEST_CASE("calibration of the two-sample test") {
  int rejected = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    Histogram x, y;
    Rng rx(rep, 1), ry(rep, 2);
    for (int i = 0; i < 5000; ++i) {
      ++x[static_cast<std::int64_t>(rx.binomial(40, 0.4))];
      ++y[static_cast<std::int64_t>(ry.binomial(40, 0.4))];
    }
    rejected += chisq_compare(x, y).p_value <= 1e-3;
  }
  CHECK(rejected <= 10);
}

TEST_CASE("passive fraction series and slopes") {
  std::vector<TrajectoryRecord> recs(3);
  recs[1].passive_fraction = 0.25;
  recs[2].passive_fraction = 1.0;
  CHECK(passive_fraction_series(recs) == std::vector<double>{0.0, 0.25, 1.0});
  CHECK(loglog_slope({1, 10, 100}, {2, 20, 200}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 100}, {3, 30}) == doctest::Approx(0.5));
  auto rows = scaling_bench([](Count, const std::string&) {}, {100}, {"x"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 100);
}

TEST_CASE("thread count from the environment") {
  setenv("CRNBATCH_THREADS", "3", 1);
  CHECK(default_threads() == 3);
  unsetenv("CRNBATCH_THREADS");
  CHECK(default_threads() >= 1);
}
