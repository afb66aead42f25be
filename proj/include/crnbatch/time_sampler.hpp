#ifndef CRNBATCH_TIME_SAMPLER_HPP
#define CRNBATCH_TIME_SAMPLER_HPP

#include <cstdint>
#include <list>
#include <string_view>
#include <utility>

#include "crnbatch/hypoexp.hpp"
#include "crnbatch/random.hpp"

namespace crnbatch {

enum class TimeSamplerKind { Exact, Gamma, Direct };

TimeSamplerKind parse_time_sampler(std::string_view name);
std::string_view to_string(TimeSamplerKind kind);

// Draws batch durations. Exact: single exponential, Erlang, direct summation
// below `direct_below` stages, adaptive rejection up to kMaxArsStages, gamma
// moment matching above. Envelopes and moments are cached per spec.
class TimeSampler {
 public:
  static constexpr Count kMaxArsStages = 4096;

  explicit TimeSampler(TimeSamplerKind kind = TimeSamplerKind::Exact, Count direct_below = 64,
                       std::size_t cache_size = 16);

  TimeSamplerKind kind() const { return kind_; }
  double sample(const HypoexpSpec& spec, Rng& rng);
  std::uint64_t envelopes_built() const { return envelopes_built_; }

 private:
  ArsEnvelope& envelope(const HypoexpSpec& spec);
  const HypoexpMoments& moments(const HypoexpSpec& spec);

  TimeSamplerKind kind_;
  Count direct_below_;
  std::size_t cache_size_;
  std::list<std::pair<HypoexpSpec, ArsEnvelope>> envelopes_;  // most recent first
  std::list<std::pair<HypoexpSpec, HypoexpMoments>> moments_;
  std::uint64_t envelopes_built_ = 0;
};

}  // namespace crnbatch

#endif  // CRNBATCH_TIME_SAMPLER_HPP
