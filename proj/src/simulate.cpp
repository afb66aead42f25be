#include "crnbatch/simulate.hpp"

#include <string>

#include "crnbatch/errors.hpp"

namespace crnbatch {

Method parse_method(std::string_view name) {
  if (name == "batch") return Method::Batch;
  if (name == "gillespie") return Method::Gillespie;
  if (name == "auto") return Method::Auto;
  throw InvalidParams("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Batch: return "batch";
    case Method::Gillespie: return "gillespie";
    case Method::Auto: return "auto";
  }
  return "batch";
}

RunResult simulate(const Crn& crn, Volume v, const Configuration& c0, const SimulationOptions& options,
                   Streams& streams, const Checkpoints& checkpoints) {
  if (options.method == Method::Gillespie) {
    RunResult res;
    res.records = gillespie_run(c0, crn, v, options.stop, checkpoints, streams);
    res.stats.real = res.stats.gillespie_steps = res.records.back().step;
    return res;
  }
  const bool hybrid = options.method == Method::Auto;
  if (options.stop.kind == Stop::Kind::Steps) {
    DiscreteParams p;
    p.steps = options.stop.steps;
    p.hybrid = hybrid;
    p.timestamps = options.timestamps;
    p.time_sampler = options.time_sampler;
    p.direct_below = options.direct_below;
    return run_discrete(crn, v, c0, p, streams, checkpoints);
  }
  ContinuousParams p;
  p.t_max = options.stop.time;
  p.p = options.p;
  p.time_sampler = options.time_sampler;
  p.pad = options.pad;
  p.hybrid = hybrid;
  p.direct_below = options.direct_below;
  return run_continuous(crn, v, c0, p, streams, checkpoints);
}

}  // namespace crnbatch
