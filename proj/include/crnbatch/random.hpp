#ifndef CRNBATCH_RANDOM_HPP
#define CRNBATCH_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "crnbatch/crn.hpp"

namespace crnbatch {

// Seedable generator; (seed, stream, index) select independent sequences.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0, std::uint64_t index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return eng_(); }

  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1]
  Count below(Count n);  // [0, n)
  double exponential(double rate);
  double gamma(double shape, double rate);
  Count binomial(Count n, double p);
  // Successes among `draws` taken without replacement from `total` items, `good` of them successes.
  Count hypergeometric(Count total, Count good, Count draws);
  // out[i] = draws of type i; counts sum to >= draws.
  void multivariate_hypergeometric(const std::vector<Count>& counts, Count draws, std::vector<Count>& out);

 private:
  Count hypergeometric_core(Count total, Count good, Count draws);
  std::mt19937_64 eng_;
};

// Per-trajectory streams: reactions and batch durations never share randomness.
struct Streams {
  Rng reactions;
  Rng time;
  static Streams from_seed(std::uint64_t seed, std::uint64_t trial = 0);
};

}  // namespace crnbatch

#endif  // CRNBATCH_RANDOM_HPP
