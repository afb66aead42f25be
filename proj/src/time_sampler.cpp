#include "crnbatch/time_sampler.hpp"

#include <string>

#include "crnbatch/errors.hpp"

namespace crnbatch {

TimeSamplerKind parse_time_sampler(std::string_view name) {
  if (name == "exact") return TimeSamplerKind::Exact;
  if (name == "gamma") return TimeSamplerKind::Gamma;
  if (name == "direct") return TimeSamplerKind::Direct;
  throw InvalidParams("unknown time sampler '" + std::string(name) + "'");
}

std::string_view to_string(TimeSamplerKind kind) {
  switch (kind) {
    case TimeSamplerKind::Exact: return "exact";
    case TimeSamplerKind::Gamma: return "gamma";
    case TimeSamplerKind::Direct: return "direct";
  }
  return "exact";
}

TimeSampler::TimeSampler(TimeSamplerKind kind, Count direct_below, std::size_t cache_size)
    : kind_(kind), direct_below_(direct_below), cache_size_(cache_size == 0 ? 1 : cache_size) {}

namespace {

template <class List>
auto* find_front(List& list, const HypoexpSpec& spec) {
  for (auto it = list.begin(); it != list.end(); ++it) {
    if (it->first == spec) {
      if (it != list.begin()) list.splice(list.begin(), list, it);
      return &list.front().second;
    }
  }
  return static_cast<decltype(&list.front().second)>(nullptr);
}

}  // namespace

ArsEnvelope& TimeSampler::envelope(const HypoexpSpec& spec) {
  if (auto* e = find_front(envelopes_, spec)) return *e;
  envelopes_.emplace_front(spec, ArsEnvelope(spec));
  ++envelopes_built_;
  if (envelopes_.size() > cache_size_) envelopes_.pop_back();
  return envelopes_.front().second;
}

const HypoexpMoments& TimeSampler::moments(const HypoexpSpec& spec) {
  if (auto* m = find_front(moments_, spec)) return *m;
  moments_.emplace_front(spec, hypoexp_moments(spec));
  if (moments_.size() > cache_size_) moments_.pop_back();
  return moments_.front().second;
}

double TimeSampler::sample(const HypoexpSpec& spec, Rng& rng) {
  validate(spec);
  switch (kind_) {
    case TimeSamplerKind::Direct:
      return sample_hypoexp_direct(spec, rng);
    case TimeSamplerKind::Gamma:
      return sample_hypoexp_gamma_approx(spec, moments(spec), rng);
    case TimeSamplerKind::Exact:
      break;
  }
  if (spec.k == 1) return rng.exponential(spec.rate(0));
  if (spec.g == 0) return rng.gamma(static_cast<double>(spec.k), spec.rate(0));
  if (spec.k < direct_below_) return sample_hypoexp_direct(spec, rng);
  if (spec.k > kMaxArsStages) return sample_hypoexp_gamma_approx(spec, moments(spec), rng);
  return sample_hypoexp_exact(spec, envelope(spec), rng);
}

}  // namespace crnbatch
