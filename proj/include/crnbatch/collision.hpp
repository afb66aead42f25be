#ifndef CRNBATCH_COLLISION_HPP
#define CRNBATCH_COLLISION_HPP

#include <limits>
#include <utility>

#include "crnbatch/crn.hpp"
#include "crnbatch/random.hpp"

namespace crnbatch {

// Populations above this are rejected: log-gamma differences lose too much
// precision for inversion sampling.
inline constexpr Count kMaxCollisionPopulation = 10'000'000'000ULL;

struct CollisionRunParams {
  Count n = 0;  // population
  Count r = 0;  // red (already reacted) molecules
  int o = 1;
  int g = 0;
};

// log Pr[l >= k]; -inf outside the support [0, (n-r)/o].
double coll_log_ccdf(const CollisionRunParams& p, Count k);

// log of x (x-g) (x-2g) ... down to the last positive term.
double multifactorial_log(Count x, Count g);

// Inversion sampler; draws min(l, cap).
Count sample_coll(const CollisionRunParams& p, Rng& rng, Count cap = std::numeric_limits<Count>::max());

// Bounds on E[l] for r = 0.
std::pair<double, double> coll_expectation_bounds(Count n, int o, int g);

}  // namespace crnbatch

#endif  // CRNBATCH_COLLISION_HPP
