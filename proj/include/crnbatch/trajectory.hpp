#ifndef CRNBATCH_TRAJECTORY_HPP
#define CRNBATCH_TRAJECTORY_HPP

#include <cstdint>
#include <vector>

#include "crnbatch/crn.hpp"

namespace crnbatch {

struct TrajectoryRecord {
  std::uint64_t step = 0;  // non-passive reactions executed so far
  double time = 0.0;
  Configuration config;
  double passive_fraction = 0.0;  // passive / all reactions since the previous record
  bool coarse = false;            // configuration taken from the preceding batch boundary
  bool terminal = false;

  bool operator==(const TrajectoryRecord&) const = default;
};

// Sorted step counts or times at which a record is wanted. The initial and
// final states are always recorded.
struct Checkpoints {
  std::vector<double> marks;

  static Checkpoints none() { return {}; }
  // `count` evenly spaced marks in (0, end].
  static Checkpoints evenly(double end, std::uint64_t count);
};

struct RunStats {
  std::uint64_t batches = 0;          // execute_batch calls
  std::uint64_t real = 0;             // non-passive reactions
  std::uint64_t passive = 0;
  std::uint64_t gillespie_steps = 0;  // steps taken by the fallback
  std::uint64_t fallbacks = 0;
  std::uint64_t refreshes = 0;        // uniformizations
  std::uint64_t rejections = 0;       // end-of-run restarts
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  RunStats stats;
  const TrajectoryRecord& final() const { return records.back(); }
};

}  // namespace crnbatch

#endif  // CRNBATCH_TRAJECTORY_HPP
