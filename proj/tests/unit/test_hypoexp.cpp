#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "crnbatch/errors.hpp"
#include "crnbatch/hypoexp.hpp"
#include "crnbatch/hypoexp_mp.hpp"
#include "crnbatch/numeric.hpp"
#include "crnbatch/validation.hpp"

using namespace crnbatch;

namespace {

// rates 2, 3
const HypoexpSpec kTwoThree{2, 2, 1, 1, 1.0};

double ks_against(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
  }
  return d;
}

double coefficient_cdf(const HypoexpSpec& s, const std::vector<SignedLog>& c, double t) {
  double surv = 0.0;
  for (Count i = 0; i < s.k; ++i) surv += c[i].value() * std::exp(-s.rate(i) * t);
  return 1.0 - surv;
}

}  // namespace

TEST_CASE("spec rates and validation") {
  CHECK(kTwoThree.rates() == std::vector<double>{2.0, 3.0});
  const HypoexpSpec s{10, 3, 2, 1, 0.5};
  CHECK(s.rate(2) == doctest::Approx(0.5 * 66.0));
  CHECK_THROWS_AS(validate(HypoexpSpec{1, 2, 2, 1, 1.0}), InvalidParams);
  CHECK_THROWS_AS(validate(HypoexpSpec{5, 0, 2, 1, 1.0}), InvalidParams);
  CHECK_THROWS_AS(validate(HypoexpSpec{5, 2, 2, 1, 0.0}), InvalidParams);
}

TEST_CASE("coefficients, small cases") {
  auto c = hypoexp_coefficients(kTwoThree);
  REQUIRE(c.size() == 2);
  CHECK(c[0].value() == doctest::Approx(3.0));
  CHECK(c[1].value() == doctest::Approx(-2.0));
  auto one = hypoexp_coefficients(HypoexpSpec{7, 1, 2, 1, 1.0});
  CHECK(one[0].value() == 1.0);
  CHECK_THROWS_AS(hypoexp_coefficients(HypoexpSpec{7, 3, 2, 0, 1.0}), DegenerateRates);
  auto f = hypoexp_coefficients_fast(kTwoThree);
  CHECK(f[0].value() == doctest::Approx(3.0));
  CHECK(f[1].value() == doctest::Approx(-2.0));
  // f(x) = (2 - x)(3 - x): C_0 = 3 / (3 - 2), C_1 = 2 / (2 - 3)
}

TEST_CASE("coefficients sum to one") {
  for (Count k : {2u, 3u, 5u, 8u, 12u}) {
    for (int o : {1, 2, 3}) {
      const HypoexpSpec s{40, k, o, 2, 1.0};
      unsigned bits = 0;
      const auto exact = mp::coefficients_fast_checked(s, bits);
      mp::ScopedPrecision prec(bits);
      mp::Real fast = 0;
      for (const auto& c : exact) fast += c;
      CHECK(static_cast<double>(abs(fast - 1)) < 1e-8);
      if (k <= 5) {
        CompensatedSum naive;
        for (const auto& x : hypoexp_coefficients(s)) naive.add(x.value());
        CHECK(naive.value() == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("fast and naive coefficients agree") {
  for (Count k : {4u, 16u, 64u}) {
    for (int o : {1, 2, 3}) {
      const HypoexpSpec s{100, k, o, 1, 1.0};
      auto a = hypoexp_coefficients(s);
      auto b = hypoexp_coefficients_fast(s);
      for (Count i = 0; i < k; ++i) {
        CHECK(a[i].sign == b[i].sign);
        CHECK(std::fabs(std::expm1(a[i].log_abs - b[i].log_abs)) < 1e-8);
      }
    }
  }
}

TEST_CASE("log pdf") {
  auto c = hypoexp_coefficients(kTwoThree);
  CHECK(hypoexp_logpdf(kTwoThree, c, 1.0) == doctest::Approx(std::log(6.0 * (std::exp(-2.0) - std::exp(-3.0)))));
  const HypoexpSpec one{4, 1, 1, 1, 2.0};
  CHECK(hypoexp_logpdf(one, hypoexp_coefficients(one), 0.7) == doctest::Approx(std::log(8.0) - 8.0 * 0.7));
  CHECK_THROWS_AS(hypoexp_logpdf(kTwoThree, c, 0.0), NumericUnderflow);
  CHECK_THROWS_AS(hypoexp_logpdf(kTwoThree, c, -1.0), InvalidParams);
}

TEST_CASE("uniformized density matches the coefficient form") {
  const HypoexpSpec s{20, 6, 2, 1, 0.01};
  auto c = hypoexp_coefficients(s);
  HypoexpDensity d(s);
  const double mu = hypoexp_moments(s, false).mean;
  for (double f : {0.2, 0.5, 1.0, 2.0, 4.0}) {
    const double t = f * mu;
    CHECK(d.eval(t).log_pdf == doctest::Approx(hypoexp_logpdf(s, c, t)).epsilon(1e-9));
    CHECK(std::exp(d.log_survival(t)) == doctest::Approx(1.0 - coefficient_cdf(s, c, t)).epsilon(1e-8));
    const double h = 1e-6 * mu;
    const double fd = (hypoexp_logpdf(s, c, t + h) - hypoexp_logpdf(s, c, t - h)) / (2 * h);
    CHECK(d.eval(t).slope == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("log density is concave") {
  for (const HypoexpSpec& s : {HypoexpSpec{50, 10, 2, 1, 0.02}, HypoexpSpec{1000, 40, 3, 2, 1e-6},
                               HypoexpSpec{64, 200, 1, 1, 1.0}}) {
    HypoexpDensity d(s);
    const double mu = hypoexp_moments(s, false).mean;
    std::vector<double> h;
    const double step = mu / 25.0;
    for (int i = 1; i <= 100; ++i) h.push_back(d.eval(i * step).log_pdf);
    for (std::size_t i = 1; i + 1 < h.size(); ++i) CHECK(h[i - 1] - 2 * h[i] + h[i + 1] <= 1e-9 * std::fabs(h[i]));
  }
}

TEST_CASE("moment closed forms") {
  CHECK(hypoexp_mean_closed(4, 2, 2, 1) == doctest::Approx(4.0 / 15.0));
  CHECK(hypoexp_variance_closed(4, 2, 2, 1) == doctest::Approx(17.0 / 450.0));
  double h = 0.0;
  for (int i = 1; i <= 50; ++i) h += 1.0 / i;
  CHECK(hypoexp_mean_closed(1, 50, 1, 1) == doctest::Approx(h));
  CHECK(hypoexp_mean_closed(30, 1, 3, 2) == doctest::Approx(1.0 / binom(30, 3)));
  CHECK(hypoexp_variance_closed(30, 1, 3, 2) == doctest::Approx(1.0 / (binom(30, 3) * binom(30, 3))));
  double tri = 0.0;
  for (int i = 0; i < 40; ++i) tri += 1.0 / ((7.0 + i) * (7.0 + i));
  CHECK(hypoexp_variance_closed(7, 40, 1, 1) == doctest::Approx(tri));
  CHECK_THROWS_AS(hypoexp_mean_closed(2, 5, 3, 1), InvalidParams);
  CHECK_THROWS_AS(hypoexp_mean_closed(20, 5, 3, 0), InvalidParams);
  for (Count n : {10u, 1000u}) {
    for (int o = 1; o <= 4; ++o) {
      const double m = hypoexp_mean_closed(n, 300, o, 2), md = hypoexp_mean_direct(n, 300, o, 2);
      CHECK(std::fabs(m - md) <= 1e-9 * md);
      const double v = hypoexp_variance_closed(n, 300, o, 3), vd = hypoexp_variance_direct(n, 300, o, 3);
      CHECK(std::fabs(v - vd) <= 1e-9 * vd);
    }
  }
}

TEST_CASE("geometric-mean shortcut") {
  const HypoexpSpec s{1000000, 1000, 2, 1, 1.0};
  HypoexpMoments g = hypoexp_moments(s);
  CHECK(g.geometric);
  CHECK(g.delta == doctest::Approx(0.002).epsilon(0.01));
  const double exact = hypoexp_mean_direct(s.n0, s.k, s.o, s.g);
  CHECK(std::fabs(g.mean - exact) / exact <= g.delta / 2 + g.delta * g.delta / 8);
  HypoexpMoments e = hypoexp_moments(s, false);
  CHECK(!e.geometric);
  CHECK(e.mean == doctest::Approx(exact).epsilon(1e-12));
  // delta just below 0.1
  const HypoexpSpec t{1000, 50, 1, 2, 1.0};
  HypoexpMoments gt = hypoexp_moments(t);
  CHECK(gt.geometric);
  CHECK(gt.delta < 0.1);
  const double et = hypoexp_mean_direct(t.n0, t.k, t.o, t.g);
  CHECK(std::fabs(gt.mean - et) / et <= gt.delta / 2 + gt.delta * gt.delta / 8);
  CHECK(std::fabs(gt.mean - et) / et < 0.01);
}

TEST_CASE("gamma approximation") {
  Rng rng(1, 0);
  const HypoexpSpec erl{10, 5, 2, 0, 0.1};
  double sum = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) sum += sample_hypoexp_gamma_approx(erl, rng);
  const double mu = 5.0 / (0.1 * 45.0);
  CHECK(std::fabs(sum / n - mu) < 4.0 * mu / std::sqrt(5.0 * n));
  const HypoexpSpec s{200, 30, 2, 1, 0.01};
  const HypoexpMoments m = hypoexp_moments(s, false);
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_hypoexp_gamma_approx(s, m, rng);
    s1 += x;
    s2 += x * x;
  }
  CHECK(std::fabs(s1 / n - m.mean) < 4.0 * std::sqrt(m.variance / n));
  CHECK((s2 / n - (s1 / n) * (s1 / n)) == doctest::Approx(m.variance).epsilon(0.05));
}

TEST_CASE("adaptive rejection sampling is exact") {
  Rng rng(2, 0);
  const HypoexpSpec s32{100, 32, 2, 1, 0.01};
  ArsEnvelope env;
  const int n = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_hypoexp_exact(s32, env, rng);
    s1 += x;
    s2 += x * x;
  }
  const double mu = hypoexp_mean_direct(100, 32, 2, 1) / 0.01;
  const double var = hypoexp_variance_direct(100, 32, 2, 1) / 1e-4;
  CHECK(std::fabs(s1 / n - mu) < 3.0 * std::sqrt(var / n));
  CHECK((s2 / n - (s1 / n) * (s1 / n)) == doctest::Approx(var).epsilon(0.03));
  CHECK(env.evaluations() < 2000);

  const HypoexpSpec s8{12, 8, 2, 2, 0.3};
  ArsEnvelope e8;
  std::vector<double> xs(n);
  for (auto& x : xs) x = sample_hypoexp_exact(s8, e8, rng);
  const auto c8 = hypoexp_coefficients(s8);
  CHECK(ks_against(xs, [&](double t) { return coefficient_cdf(s8, c8, t); }) < 1.95 / std::sqrt(n));

  CHECK_THROWS_AS(sample_hypoexp_exact(s32, e8, rng), EnvelopeMismatch);
  const HypoexpSpec one{10, 1, 2, 1, 0.5};
  ArsEnvelope e1;
  double m1 = 0.0;
  for (int i = 0; i < n; ++i) m1 += sample_hypoexp_exact(one, e1, rng);
  CHECK(std::fabs(m1 / n - 1.0 / 22.5) < 4.0 / 22.5 / std::sqrt(n));
}

TEST_CASE("direct sampler") {
  Rng rng(3, 0);
  const HypoexpSpec s{30, 12, 3, 1, 1e-3};
  double sum = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) sum += sample_hypoexp_direct(s, rng);
  const double mu = hypoexp_mean_direct(30, 12, 3, 1) / 1e-3;
  const double sd = std::sqrt(hypoexp_variance_direct(30, 12, 3, 1)) / 1e-3;
  CHECK(std::fabs(sum / n - mu) < 4.0 * sd / std::sqrt(n));
}

TEST_CASE("end-of-run sampling") {
  Rng rng(4, 0);
  EndOfRun zero = sample_end_of_run(kTwoThree, 0.0, rng);
  CHECK(zero.reactions == 0);
  CHECK(zero.rejections == 0);
  const HypoexpSpec one{3, 1, 1, 1, 1.0};
  for (int i = 0; i < 50; ++i) CHECK(sample_end_of_run(one, 0.2, rng).reactions == 0);

  // against direct simulation conditioned on overrunning the deadline
  const HypoexpSpec s{10, 6, 2, 1, 0.05};
  const double deadline = 0.5 * hypoexp_mean_direct(10, 6, 2, 1) / 0.05;
  Histogram eor, cond;
  std::uint64_t rejections = 0;
  Rng r2(4, 1);
  while (histogram_total(cond) < 30000) {
    double t = 0.0;
    Count done = 0;
    for (Count i = 0; i < s.k; ++i) {
      t += r2.exponential(s.rate(i));
      if (t > deadline) break;
      ++done;
    }
    if (done < s.k) ++cond[static_cast<std::int64_t>(done)];
  }
  for (int i = 0; i < 30000; ++i) {
    EndOfRun e = sample_end_of_run(s, deadline, rng);
    rejections += e.rejections;
    CHECK(e.times.size() == e.reactions);
    ++eor[static_cast<std::int64_t>(e.reactions)];
  }
  CHECK(chisq_compare(eor, cond).p_value > 1e-3);
  Histogram exact;
  for (int i = 0; i < 30000; ++i) ++exact[static_cast<std::int64_t>(sample_end_of_run_exact(s, deadline, rng))];
  CHECK(chisq_compare(exact, cond).p_value > 1e-3);
  // overrun with probability far below the cap's reach
  const HypoexpSpec fast{50, 20, 2, 1, 1.0};
  const Count last = sample_end_of_run_exact(fast, 1.0, rng);
  CHECK(last == 19);
  CHECK_THROWS_AS(sample_end_of_run(HypoexpSpec{10, 2, 1, 1, 1e6}, 1e3, rng, 5), RejectionLimitExceeded);
}
