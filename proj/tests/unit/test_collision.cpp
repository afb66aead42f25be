#include <doctest.h>

#include <cmath>

#include "crnbatch/collision.hpp"
#include "crnbatch/errors.hpp"
#include "crnbatch/validation.hpp"
#include "support/urn.hpp"

using namespace crnbatch;

TEST_CASE("ccdf frozen values") {
  CHECK(coll_log_ccdf({4, 0, 2, 0}, 0) == 0.0);
  CHECK(std::exp(coll_log_ccdf({4, 0, 2, 0}, 2)) == doctest::Approx(1.0 / 6.0));
  CHECK(std::exp(coll_log_ccdf({4, 0, 2, 1}, 2)) == doctest::Approx(1.0 / 10.0));
  CHECK(std::isinf(coll_log_ccdf({4, 0, 2, 1}, 3)));
  CHECK(std::isinf(coll_log_ccdf({10, 4, 3, 1}, 3)));
  CHECK_THROWS_AS(coll_log_ccdf({4, 5, 2, 1}, 1), InvalidParams);
  CHECK_THROWS_AS(coll_log_ccdf({4, 0, 0, 1}, 1), InvalidParams);
  CHECK_THROWS_AS(coll_log_ccdf({kMaxCollisionPopulation + 1, 0, 2, 1}, 1), InvalidParams);
}

TEST_CASE("ccdf matches the product form for g = 0, o = 2") {
  for (Count n : {10u, 101u, 1000u}) {
    double prod = 1.0;
    for (Count k = 1; k <= n / 2; ++k) {
      const double i = static_cast<double>(k - 1), nd = static_cast<double>(n);
      prod *= (nd - 2 * i) * (nd - 2 * i - 1) / (nd * (nd - 1));
      if (prod < 1e-280) break;
      CHECK(std::exp(coll_log_ccdf({n, 0, 2, 0}, k)) == doctest::Approx(prod).epsilon(1e-9));
    }
  }
}

TEST_CASE("ccdf is monotone in k and r") {
  for (Count k = 0; k < 60; ++k) {
    CHECK(coll_log_ccdf({500, 0, 3, 2}, k + 1) <= coll_log_ccdf({500, 0, 3, 2}, k));
    CHECK(coll_log_ccdf({500, 40, 3, 2}, k) <= coll_log_ccdf({500, 0, 3, 2}, k));
  }
}

TEST_CASE("multifactorial") {
  CHECK(multifactorial_log(17, 5) == doctest::Approx(std::log(2856.0)));
  CHECK(multifactorial_log(10, 1) == doctest::Approx(std::lgamma(11.0)));
  CHECK(multifactorial_log(4, 7) == doctest::Approx(std::log(4.0)));
  CHECK(multifactorial_log(12, 3) == doctest::Approx(std::log(12.0 * 9 * 6 * 3)));
  CHECK_THROWS_AS(multifactorial_log(0, 1), InvalidParams);
}

TEST_CASE("sampler edge cases") {
  Rng rng(1, 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_coll({30, 30, 2, 1}, rng) == 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_coll({1, 0, 2, 0}, rng) == 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_coll({1000, 0, 2, 1}, rng, 3) <= 3);
}

TEST_CASE("sampler matches the brute-force urn") {
  Rng a(2, 0), b(2, 1);
  const CollisionRunParams p{60, 0, 2, 1};
  Histogram hs, hu;
  for (int i = 0; i < 30000; ++i) {
    ++hs[static_cast<std::int64_t>(sample_coll(p, a))];
    ++hu[static_cast<std::int64_t>(testing::urn_run_length(p, b))];
  }
  CHECK(chisq_compare(hs, hu).p_value > 1e-3);
  const CollisionRunParams pr{60, 10, 3, 2};
  Histogram rs, ru;
  for (int i = 0; i < 30000; ++i) {
    ++rs[static_cast<std::int64_t>(sample_coll(pr, a))];
    ++ru[static_cast<std::int64_t>(testing::urn_run_length(pr, b))];
  }
  CHECK(chisq_compare(rs, ru).p_value > 1e-3);
}

TEST_CASE("expectation bounds") {
  auto [lo, hi] = coll_expectation_bounds(10000, 1, 0);
  CHECK(lo == doctest::Approx(100.0 * (1.0 - std::exp(-1.0))));
  CHECK(hi == 200.0);
  Rng rng(3, 0);
  double sum = 0.0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) sum += static_cast<double>(sample_coll({1000000, 0, 2, 1}, rng));
  auto [l2, h2] = coll_expectation_bounds(1000000, 2, 1);
  CHECK(sum / trials >= l2);
  CHECK(sum / trials <= h2);
  auto [l1, h1] = coll_expectation_bounds(1, 2, 0);
  CHECK(l1 == 0.0);
  CHECK(h1 == 2.0);
}
