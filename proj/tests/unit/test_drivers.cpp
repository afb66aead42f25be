#include <doctest.h>

#include <cmath>

#include "crnbatch/continuous_driver.hpp"
#include "crnbatch/discrete_driver.hpp"
#include "crnbatch/parser.hpp"
#include "crnbatch/reference_sim.hpp"
#include "crnbatch/simulate.hpp"
#include "crnbatch/validation.hpp"

using namespace crnbatch;

namespace {

const Crn kDimer = parse_crn("2M <-> D : 2, 1");
const Crn kLv = parse_crn("R -> 2R : 1\nF -> : 1\nF + R -> 2F : 1");

Histogram endpoint(const SimulationOptions& opt, std::uint64_t seed, std::uint64_t trials) {
  const Configuration c0 = parse_config("M=100", kDimer);
  return endpoint_histogram(
      [&](std::uint64_t i) {
        Streams s = Streams::from_seed(seed, i);
        return static_cast<std::int64_t>(simulate(kDimer, Volume{100}, c0, opt, s).final().config[1]);
      },
      trials, 1);
}

}  // namespace

TEST_CASE("zero-length runs") {
  Streams s = Streams::from_seed(1);
  const Configuration c0 = parse_config("M=100", kDimer);
  RunResult d = run_discrete(kDimer, Volume{100}, c0, DiscreteParams{}, s);
  REQUIRE(d.records.size() == 1);
  CHECK(d.final().config == c0);
  ContinuousParams cp;
  RunResult c = run_continuous(kDimer, Volume{100}, c0, cp, s);
  REQUIRE(c.records.size() == 1);
  CHECK(c.final().time == 0.0);
}

TEST_CASE("discrete driver matches Gillespie") {
  SimulationOptions batch, gill;
  batch.stop = gill.stop = Stop::at_steps(60);
  batch.timestamps = false;
  gill.method = Method::Gillespie;
  Histogram a = endpoint(batch, 2, 20000), b = endpoint(gill, 3, 20000);
  CHECK(chisq_compare(a, b).p_value > 1e-3);
  CHECK(histogram_mean(a) == doctest::Approx(23.895).epsilon(0.01));
}

TEST_CASE("continuous driver matches Gillespie") {
  SimulationOptions gill;
  gill.method = Method::Gillespie;
  gill.stop = Stop::at_time(0.5);
  Histogram ref = endpoint(gill, 4, 20000);
  CHECK(histogram_mean(ref) == doctest::Approx(20.482).epsilon(0.01));
  for (auto kind : {TimeSamplerKind::Exact, TimeSamplerKind::Gamma, TimeSamplerKind::Direct}) {
    SimulationOptions opt;
    opt.stop = Stop::at_time(0.5);
    opt.time_sampler = kind;
    opt.direct_below = 2;
    Histogram h = endpoint(opt, 5 + static_cast<std::uint64_t>(kind), 20000);
    CHECK(chisq_compare(ref, h).p_value > 1e-3);
    CHECK(histogram_mean(h) == doctest::Approx(20.482).epsilon(0.01));
  }
}

TEST_CASE("auto method matches Gillespie") {
  SimulationOptions gill, hyb;
  gill.method = Method::Gillespie;
  hyb.method = Method::Auto;
  gill.stop = hyb.stop = Stop::at_time(0.5);
  CHECK(chisq_compare(endpoint(gill, 8, 20000), endpoint(hyb, 9, 20000)).p_value > 1e-3);
}

TEST_CASE("terminal states") {
  const Crn crn = parse_crn("A -> B : 1");
  Streams s = Streams::from_seed(10);
  DiscreteParams dp;
  dp.steps = 10;
  RunResult d = run_discrete(crn, Volume{1}, parse_config("A=3", crn), dp, s, Checkpoints::evenly(10, 5));
  CHECK(d.final().step == 10);
  CHECK(d.final().terminal);
  CHECK(d.final().config == parse_config("B=3", crn));
  ContinuousParams cp;
  cp.t_max = 1e3;
  RunResult c = run_continuous(crn, Volume{1}, parse_config("A=3", crn), cp, s);
  CHECK(c.final().time == 1e3);
  CHECK(c.final().terminal);
  CHECK(c.final().config == parse_config("B=3", crn));
}

TEST_CASE("records carry only original species and are reproducible") {
  const Configuration c0 = parse_config("R=500, F=500", kLv);
  ContinuousParams cp;
  cp.t_max = 3.0;
  Streams s1 = Streams::from_seed(11), s2 = Streams::from_seed(11);
  RunResult a = run_continuous(kLv, Volume{1000}, c0, cp, s1, Checkpoints::evenly(3.0, 30));
  RunResult b = run_continuous(kLv, Volume{1000}, c0, cp, s2, Checkpoints::evenly(3.0, 30));
  CHECK(a.records == b.records);
  REQUIRE(a.records.size() == 31);
  for (const auto& r : a.records) CHECK(r.config.size() == 2);
  for (std::size_t i = 1; i + 1 < a.records.size(); ++i) {
    CHECK(a.records[i].coarse);
    CHECK(a.records[i].time == doctest::Approx(0.1 * static_cast<double>(i)));
    CHECK(a.records[i].passive_fraction > 0.0);
    CHECK(a.records[i].passive_fraction < 1.0);
  }
  CHECK(!a.final().coarse);
  CHECK(a.stats.batches > 0);
}

TEST_CASE("discrete checkpoints land on batch boundaries") {
  const Configuration c0 = parse_config("R=500, F=500", kLv);
  DiscreteParams dp;
  dp.steps = 2000;
  dp.timestamps = true;
  Streams s = Streams::from_seed(12);
  RunResult r = run_discrete(kLv, Volume{1000}, c0, dp, s, Checkpoints::evenly(2000, 10));
  CHECK(r.final().step == 2000);
  double last = 0.0;
  std::size_t mark = 1;
  for (std::size_t i = 1; i + 1 < r.records.size(); ++i) {
    CHECK(r.records[i].step >= static_cast<std::uint64_t>(200 * mark));
    CHECK(r.records[i].time > last);
    last = r.records[i].time;
    while (mark <= 10 && 200.0 * mark <= static_cast<double>(r.records[i].step)) ++mark;
  }
}

TEST_CASE("configurations do not depend on the time sampler") {
  const Configuration c0 = parse_config("R=300, F=200", kLv);
  std::vector<std::vector<TrajectoryRecord>> runs;
  for (auto kind : {TimeSamplerKind::Exact, TimeSamplerKind::Gamma, TimeSamplerKind::Direct}) {
    DiscreteParams dp;
    dp.steps = 3000;
    dp.timestamps = true;
    dp.time_sampler = kind;
    dp.direct_below = 2;
    Streams s = Streams::from_seed(13);
    runs.push_back(run_discrete(kLv, Volume{500}, c0, dp, s, Checkpoints::evenly(3000, 20)).records);
  }
  for (std::size_t k = 1; k < runs.size(); ++k) {
    REQUIRE(runs[k].size() == runs[0].size());
    for (std::size_t i = 0; i < runs[0].size(); ++i) {
      CHECK(runs[k][i].config == runs[0][i].config);
      CHECK(runs[k][i].step == runs[0][i].step);
    }
  }
}

TEST_CASE("choose_p") {
  CHECK(choose_p(10000, std::pow(10000.0, 1.5)) == 0.5);
  CHECK(choose_p(10000, 10000.0) == 0.4);
  ContinuousParams cp;
  cp.t_max = 0.1;
  cp.p = 0.3;
  Streams s = Streams::from_seed(14);
  CHECK_NOTHROW(run_continuous(kDimer, Volume{100}, parse_config("M=100", kDimer), cp, s));
  cp.p = 0.7;
  CHECK_THROWS(run_continuous(kDimer, Volume{100}, parse_config("M=100", kDimer), cp, s));
}

TEST_CASE("hybrid policy") {
  const Crn leader = parse_crn("2L -> L + F : 1");
  const SlowdownReport easy = slowdown_factor(leader, parse_config("L=1000", leader), Volume{1000});
  CHECK(hybrid_policy(easy, 1000, BatchStats{}) == Policy::Batch);
  CHECK(hybrid_policy(easy, 1000, BatchStats{100, 0}) == Policy::Batch);
  CHECK(hybrid_policy(easy, 1000, BatchStats{1, 99}) == Policy::FallbackGillespie);
  const SlowdownReport hard = slowdown_factor(leader, parse_config("L=2, F=998", leader), Volume{1000});
  CHECK(hybrid_policy(hard, 1000, BatchStats{}) == Policy::FallbackGillespie);
  const SlowdownReport lv = slowdown_factor(kLv, parse_config("R=500, F=500", kLv), Volume{1000});
  CHECK(lv.slowdown <= 5.0);
  CHECK(hybrid_policy(lv, 1000, BatchStats{60, 40}) == Policy::Batch);

  BatchWindow w(2);
  w.push(1, 9);
  w.push(5, 5);
  w.push(10, 0);
  CHECK(w.stats().real == 15);
  CHECK(w.stats().passive == 5);
}

TEST_CASE("auto falls back on a leader-election tail") {
  const Crn leader = parse_crn("2L -> L + F : 1");
  ContinuousParams cp;
  cp.t_max = 50.0;
  cp.hybrid = true;
  Streams s = Streams::from_seed(15);
  RunResult r = run_continuous(leader, Volume{2000}, parse_config("L=2000", leader), cp, s);
  CHECK(r.stats.fallbacks > 0);
  CHECK(r.final().config[0] >= 1);
}
