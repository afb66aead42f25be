#include "crnbatch/continuous_driver.hpp"

#include <algorithm>
#include <cmath>

#include "crnbatch/batch.hpp"
#include "crnbatch/errors.hpp"
#include "crnbatch/hypoexp.hpp"
#include "crnbatch/numeric.hpp"
#include "regime.hpp"

namespace crnbatch {

double choose_p(Count n, double ell_estimate) {
  if (n < 1) throw InvalidParams("choose_p needs n >= 1");
  return ell_estimate >= std::pow(static_cast<double>(n), 1.25) ? 0.5 : 0.4;
}

namespace {

unsigned bucket_of(Count m) {
  unsigned i = 0;
  while (i < 63 && (Count{1} << i) < m) ++i;
  return i;
}

}  // namespace

RunResult run_continuous(const Crn& crn, Volume v, const Configuration& c0, const ContinuousParams& params,
                         Streams& streams, const Checkpoints& checkpoints) {
  if (params.p && !(*params.p > 0.0 && *params.p <= 0.5)) throw InvalidParams("p must lie in (0, 1/2]");
  if (params.t_max < 0.0) throw InvalidParams("negative end time");
  const double t_max = params.t_max;
  const bool pad = params.pad.value_or(params.time_sampler == TimeSamplerKind::Exact);

  RunResult res;
  Configuration c = c0;
  double t = 0.0;
  std::uint64_t steps = 0;
  Count since_real = 0, since_passive = 0;
  res.records.push_back({0, 0.0, c0, 0.0, false, false});

  const auto& marks = checkpoints.marks;
  std::size_t mark = 0;
  auto fraction = [&] {
    const Count all = since_real + since_passive;
    return all ? static_cast<double>(since_passive) / static_cast<double>(all) : 0.0;
  };
  auto emit_until = [&](double t_next, bool coarse) {
    for (; mark < marks.size() && marks[mark] < t_next; ++mark) {
      if (marks[mark] <= 0.0 || marks[mark] >= t_max) continue;
      res.records.push_back({steps, marks[mark], c, fraction(), coarse, false});
      since_real = since_passive = 0;
    }
  };
  auto finish = [&](bool terminal) {
    emit_until(t_max, false);
    res.records.push_back({steps, t_max, c, fraction(), false, terminal});
    return res;
  };
  if (t_max <= 0.0) return res;

  detail::Regime regime(crn, v, params.refresh_factor);
  BatchWindow window;
  TimeSampler sampler(params.time_sampler, params.direct_below);
  int bucket = -1;
  Count ell = 1;

  for (;;) {
    if (!(total_propensity(c, v, crn) > 0.0)) return finish(true);
    const Count n = c.n();
    const bool rebuilt = regime.update(n);
    if (rebuilt) ++res.stats.refreshes;
    const UniformizedCrn& u = regime.u();
    const Count k0 = u.k0();
    const int o = u.order(), g = u.generativity();
    const unsigned i = bucket_of(std::max(n, k0));
    if (rebuilt || static_cast<int>(i) != bucket) {
      bucket = static_cast<int>(i);
      const double p = params.p ? *params.p
                       : params.time_sampler == TimeSamplerKind::Exact
                           ? choose_p(std::max<Count>(n, 1), u.rate_scale() * binom(n + k0, o) * (t_max - t))
                           : 0.5;
      ell = std::max<Count>(1, static_cast<Count>(std::floor(std::pow(static_cast<double>(n), p))));
    }

    if (params.hybrid &&
        hybrid_policy(detail::current_slowdown(u, c), n, window.stats(), params.hybrid_config) ==
            Policy::FallbackGillespie) {
      ++res.stats.fallbacks;
      window.clear();
      const std::uint64_t chunk =
          std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))));
      for (std::uint64_t s = 0; s < chunk; ++s) {
        const double total = total_propensity(c, v, crn);
        if (!(total > 0.0)) break;
        const double dt = streams.time.exponential(total);
        if (t + dt > t_max) {
          t = t_max;
          return finish(false);
        }
        emit_until(t + dt, false);
        t += dt;
        // reaction choice mirrors the reference simulator
        double x = streams.reactions.uniform() * total;
        const auto& rs = crn.reactions();
        std::size_t pick = rs.size();
        for (std::size_t r = 0; r < rs.size(); ++r) {
          const double pr = propensity(c, v, rs[r]);
          if (pr <= 0.0) continue;
          pick = r;
          if (x < pr) break;
          x -= pr;
        }
        apply_in_place(c, rs[pick]);
        ++steps;
        ++since_real;
        ++res.stats.real;
        ++res.stats.gillespie_steps;
      }
      continue;
    }

    const Count n0 = pad ? (Count{1} << (i + 1)) : n + k0;
    const HypoexpSpec spec{n0, ell, o, g, u.rate_scale()};
    const double duration = sampler.sample(spec, streams.time);
    Count todo = ell;
    bool last = false;
    if (t + duration > t_max) {
      try {
        EndOfRun eor = sample_end_of_run(spec, t_max - t, streams.time, params.rejection_cap);
        res.stats.rejections += eor.rejections;
        todo = eor.reactions;
      } catch (const RejectionLimitExceeded&) {
        res.stats.rejections += params.rejection_cap;
        todo = sample_end_of_run_exact(spec, t_max - t, streams.time);
      }
      last = true;
    }
    emit_until(last ? t_max : t + duration, true);

    Configuration ext = u.embed(c, n0 - n - k0);
    while (todo > 0) {
      BatchOutcome out = execute_batch(u, ext, todo, streams.reactions);
      todo -= out.total();
      steps += out.steps_executed;
      ++res.stats.batches;
      res.stats.real += out.steps_executed;
      res.stats.passive += out.passive_count;
      since_real += out.steps_executed;
      since_passive += out.passive_count;
      window.push(out.steps_executed, out.passive_count);
      ext = std::move(out.new_config);
    }
    c = u.strip(ext);
    if (last) {
      t = t_max;
      res.records.push_back({steps, t_max, c, fraction(), false, false});
      return res;
    }
    t += duration;
  }
}

}  // namespace crnbatch
