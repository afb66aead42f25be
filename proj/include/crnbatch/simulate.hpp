#ifndef CRNBATCH_SIMULATE_HPP
#define CRNBATCH_SIMULATE_HPP

#include <optional>
#include <string_view>

#include "crnbatch/continuous_driver.hpp"
#include "crnbatch/discrete_driver.hpp"
#include "crnbatch/reference_sim.hpp"

namespace crnbatch {

enum class Method { Batch, Gillespie, Auto };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);

struct SimulationOptions {
  Method method = Method::Batch;
  Stop stop;
  TimeSamplerKind time_sampler = TimeSamplerKind::Exact;
  std::optional<double> p;
  std::optional<bool> pad;
  bool timestamps = true;  // step-limited batch runs only
  Count direct_below = 64;
};

// Single entry point over the three simulators; auto is batch with the hybrid fallback.
RunResult simulate(const Crn& crn, Volume v, const Configuration& c0, const SimulationOptions& options,
                   Streams& streams, const Checkpoints& checkpoints = {});

}  // namespace crnbatch

#endif  // CRNBATCH_SIMULATE_HPP
