#include "crnbatch/discrete_driver.hpp"

#include <algorithm>
#include <cmath>

#include "crnbatch/batch.hpp"
#include "crnbatch/reference_sim.hpp"
#include "regime.hpp"

namespace crnbatch {

double BatchStats::passive_fraction() const {
  const Count all = real + passive;
  return all ? static_cast<double>(passive) / static_cast<double>(all) : 0.0;
}

void BatchWindow::push(Count real, Count passive) {
  items_.push_back({real, passive});
  sum_.real += real;
  sum_.passive += passive;
  if (items_.size() > size_) {
    sum_.real -= items_.front().real;
    sum_.passive -= items_.front().passive;
    items_.pop_front();
  }
}

void BatchWindow::clear() {
  items_.clear();
  sum_ = {};
}

Policy hybrid_policy(const SlowdownReport& report, Count n, const BatchStats& window, const HybridConfig& config) {
  if (window.real + window.passive > 0 && window.passive_fraction() > config.passive_threshold)
    return Policy::FallbackGillespie;
  if (config.use_slowdown && report.slowdown >= std::sqrt(static_cast<double>(n)))
    return Policy::FallbackGillespie;
  return Policy::Batch;
}

RunResult run_discrete(const Crn& crn, Volume v, const Configuration& c0, const DiscreteParams& params,
                       Streams& streams, const Checkpoints& checkpoints) {
  RunResult res;
  Configuration c = c0;
  double time = 0.0;
  std::uint64_t steps = 0;
  Count since_real = 0, since_passive = 0;
  res.records.push_back({0, 0.0, c0, 0.0, false, false});

  const auto& marks = checkpoints.marks;
  std::size_t mark = 0;
  auto fraction = [&] {
    const Count all = since_real + since_passive;
    return all ? static_cast<double>(since_passive) / static_cast<double>(all) : 0.0;
  };
  auto emit = [&](std::uint64_t step, bool coarse, bool terminal) {
    res.records.push_back({step, time, c, fraction(), coarse, terminal});
    since_real = since_passive = 0;
  };
  auto cross_marks = [&] {
    bool any = false, exact = false;
    for (; mark < marks.size() && marks[mark] <= static_cast<double>(steps); ++mark) {
      if (marks[mark] <= 0.0 || marks[mark] >= static_cast<double>(params.steps)) continue;
      any = true;
      exact = exact || marks[mark] == static_cast<double>(steps);
    }
    if (any) emit(steps, !exact, false);
  };

  if (params.steps == 0) return res;
  detail::Regime regime(crn, v, params.refresh_factor);
  BatchWindow window;
  TimeSampler sampler(params.time_sampler, params.direct_below);

  while (steps < params.steps) {
    if (!(total_propensity(c, v, crn) > 0.0)) {
      // terminal: the remaining steps are self-transitions
      for (; mark < marks.size(); ++mark)
        if (marks[mark] > static_cast<double>(steps) && marks[mark] < static_cast<double>(params.steps))
          emit(static_cast<std::uint64_t>(std::ceil(marks[mark])), false, true);
      steps = params.steps;
      emit(steps, false, true);
      return res;
    }
    if (regime.update(c.n())) ++res.stats.refreshes;
    const UniformizedCrn& u = regime.u();

    if (params.hybrid &&
        hybrid_policy(detail::current_slowdown(u, c), c.n(), window.stats(), params.hybrid_config) ==
            Policy::FallbackGillespie) {
      ++res.stats.fallbacks;
      const std::uint64_t chunk = std::min<std::uint64_t>(
          std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(c.n())))),
          params.steps - steps);
      SimState s{c, time, steps};
      for (std::uint64_t i = 0; i < chunk && total_propensity(s.config, v, crn) > 0.0; ++i)
        gillespie_step(s, crn, v, streams.reactions, streams.time);
      const std::uint64_t done = s.steps - steps;
      res.stats.gillespie_steps += done;
      res.stats.real += done;
      since_real += done;
      c = std::move(s.config);
      steps = s.steps;
      if (params.timestamps) time = s.time;
      window.clear();
      cross_marks();
      continue;
    }

    const Configuration ext = u.embed(c);
    BatchOutcome out = execute_batch(u, ext, params.steps - steps, streams.reactions);
    if (params.timestamps)
      time += sampler.sample({ext.n(), out.total(), u.order(), u.generativity(), u.rate_scale()}, streams.time);
    c = u.strip(out.new_config);
    steps += out.steps_executed;
    ++res.stats.batches;
    res.stats.real += out.steps_executed;
    res.stats.passive += out.passive_count;
    since_real += out.steps_executed;
    since_passive += out.passive_count;
    window.push(out.steps_executed, out.passive_count);
    cross_marks();
  }
  emit(steps, false, false);
  return res;
}

}  // namespace crnbatch
