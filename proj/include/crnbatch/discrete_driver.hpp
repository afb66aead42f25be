#ifndef CRNBATCH_DISCRETE_DRIVER_HPP
#define CRNBATCH_DISCRETE_DRIVER_HPP

#include <cstdint>
#include <deque>

#include "crnbatch/crn.hpp"
#include "crnbatch/random.hpp"
#include "crnbatch/time_sampler.hpp"
#include "crnbatch/trajectory.hpp"
#include "crnbatch/uniformize.hpp"

namespace crnbatch {

struct BatchStats {
  Count real = 0;
  Count passive = 0;
  double passive_fraction() const;
};

// Sliding window over the most recent batches.
class BatchWindow {
 public:
  explicit BatchWindow(std::size_t size = 16) : size_(size) {}
  void push(Count real, Count passive);
  void clear();
  BatchStats stats() const { return sum_; }

 private:
  std::size_t size_;
  std::deque<BatchStats> items_;
  BatchStats sum_;
};

enum class Policy { Batch, FallbackGillespie };

struct HybridConfig {
  double passive_threshold = 0.95;
  bool use_slowdown = true;  // fall back once S >= sqrt(n)
};

Policy hybrid_policy(const SlowdownReport& report, Count n, const BatchStats& window,
                     const HybridConfig& config = {});

struct DiscreteParams {
  std::uint64_t steps = 0;  // non-passive reactions to simulate
  bool hybrid = false;
  HybridConfig hybrid_config;
  bool timestamps = false;  // sample batch durations on the time stream
  TimeSamplerKind time_sampler = TimeSamplerKind::Exact;
  Count direct_below = 64;
  double refresh_factor = 0.7;
};

// Records land on the first batch boundary at or after each step mark.
RunResult run_discrete(const Crn& crn, Volume v, const Configuration& c0, const DiscreteParams& params,
                       Streams& streams, const Checkpoints& checkpoints = {});

}  // namespace crnbatch

#endif  // CRNBATCH_DISCRETE_DRIVER_HPP
