#ifndef CRNBATCH_CONTINUOUS_DRIVER_HPP
#define CRNBATCH_CONTINUOUS_DRIVER_HPP

#include <cstdint>
#include <optional>

#include "crnbatch/crn.hpp"
#include "crnbatch/discrete_driver.hpp"
#include "crnbatch/random.hpp"
#include "crnbatch/time_sampler.hpp"
#include "crnbatch/trajectory.hpp"

namespace crnbatch {

// 1/2 when the expected reaction count reaches n^{5/4}, else 2/5.
double choose_p(Count n, double ell_estimate);

struct ContinuousParams {
  double t_max = 0.0;
  std::optional<double> p;  // batching exponent in (0, 1/2]
  TimeSamplerKind time_sampler = TimeSamplerKind::Exact;
  std::optional<bool> pad;  // W padding to power-of-two buckets; default: exact sampler only
  bool hybrid = false;
  HybridConfig hybrid_config;
  Count direct_below = 64;
  double refresh_factor = 0.7;
  std::uint64_t rejection_cap = 10000;
};

// Time marks inside a batch are reported with the configuration at the batch
// start and flagged coarse.
RunResult run_continuous(const Crn& crn, Volume v, const Configuration& c0, const ContinuousParams& params,
                         Streams& streams, const Checkpoints& checkpoints = {});

}  // namespace crnbatch

#endif  // CRNBATCH_CONTINUOUS_DRIVER_HPP
