#ifndef CRNBATCH_BATCH_HPP
#define CRNBATCH_BATCH_HPP

#include <cstdint>
#include <vector>

#include "crnbatch/crn.hpp"
#include "crnbatch/random.hpp"
#include "crnbatch/uniformize.hpp"

namespace crnbatch {

struct TensorEntry {
  std::vector<SpeciesId> tuple;  // sorted reactant multiset
  Count count = 0;
};

struct TransitionTensor {
  std::vector<TensorEntry> entries;  // sparse, sorted by tuple, nonzero counts
  Count total = 0;
};

// Groups o*l molecules drawn without replacement from c into l o-tuples.
TransitionTensor sample_transition_tensor(const Configuration& c, Count l, int o, Rng& rng);

// Uniform o-subset of green + red conditioned on containing a red molecule.
Multiset sample_collision_reactants(const Configuration& green, const Configuration& red, int o, Rng& rng);

struct BatchOutcome {
  Count steps_executed = 0;  // non-passive reactions
  Count passive_count = 0;
  bool collided = false;
  Configuration new_config;  // over the uniformized species, W not removed

  Count total() const { return steps_executed + passive_count; }
};

// One collision-free run plus (if it ends before the cap) its collision.
// `c` is over the uniformized species; at most `max_reactions` reactions,
// passive ones included, are executed.
BatchOutcome execute_batch(const UniformizedCrn& u, const Configuration& c, Count max_reactions, Rng& rng);

}  // namespace crnbatch

#endif  // CRNBATCH_BATCH_HPP
