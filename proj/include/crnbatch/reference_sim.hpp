#ifndef CRNBATCH_REFERENCE_SIM_HPP
#define CRNBATCH_REFERENCE_SIM_HPP

#include <cstdint>
#include <vector>

#include "crnbatch/crn.hpp"
#include "crnbatch/random.hpp"
#include "crnbatch/trajectory.hpp"
#include "crnbatch/uniformize.hpp"

namespace crnbatch {

struct SimState {
  Configuration config;
  double time = 0.0;
  std::uint64_t steps = 0;
};

struct Stop {
  enum class Kind { Time, Steps } kind = Kind::Steps;
  double time = 0.0;
  std::uint64_t steps = 0;

  static Stop at_time(double t) { return {Kind::Time, t, 0}; }
  static Stop at_steps(std::uint64_t l) { return {Kind::Steps, 0.0, l}; }
};

// Direct method. Reaction choice uses `rng`, the waiting time `time_rng`.
// Throws Terminal when no reaction is applicable.
void gillespie_step(SimState& s, const Crn& crn, Volume v, Rng& rng, Rng& time_rng);
void gillespie_step(SimState& s, const Crn& crn, Volume v, Rng& rng);

std::vector<TrajectoryRecord> gillespie_run(const Configuration& c0, const Crn& crn, Volume v, Stop stop,
                                            const Checkpoints& checkpoints, Streams& streams);

struct ReactionOutcome {
  bool passive = true;
  std::uint32_t reaction = 0;
};

// One step of the molecule-drawing scheduler on a uniformized CRN; `s.config`
// is over the uniformized species. Resets __W afterwards.
ReactionOutcome scheduler_step(SimState& s, const UniformizedCrn& u, Rng& rng);

// Draws o molecules uniformly without replacement; returns sorted species ids.
void draw_reactants(const Configuration& c, int o, Rng& rng, std::vector<SpeciesId>& out);

}  // namespace crnbatch

#endif  // CRNBATCH_REFERENCE_SIM_HPP
