#ifndef CRNBATCH_UNIFORMIZE_HPP
#define CRNBATCH_UNIFORMIZE_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "crnbatch/crn.hpp"

namespace crnbatch {

double total_rate_constant(const Crn& crn, const Multiset& reactants);

// k * v^d * d! / k0^{falling d}, d = o - ord(a). The d! factor keeps propensities
// equal under the r(A)! convention when more than one K is added.
double adjusted_rate_constant(const Reaction& a, int o, Count k0, Volume v);

// Pads every reaction to uniform order max(ord,1) with __K and uniform
// generativity max(gen,0) with __W. Species __K and __W are appended last.
Crn make_uniform(const Crn& crn, Volume v, Count k0);

struct Channel {
  std::uint32_t reaction;
  double rate;
};

class UniformizedCrn {
 public:
  struct Entry {
    std::vector<Channel> channels;
    double total = 0.0;
  };

  UniformizedCrn(Crn uniform, Volume v, Count k0);

  const Crn& crn() const { return crn_; }
  int order() const { return o_; }
  int generativity() const { return g_; }
  Count k0() const { return k0_; }
  Volume volume() const { return v_; }
  double k_max() const { return k_max_; }
  SpeciesId catalyst() const { return k_id_; }
  SpeciesId waste() const { return w_id_; }
  std::size_t num_species() const { return crn_.num_species(); }
  // Species of the original CRN (everything except __K, __W).
  std::size_t num_original_species() const { return crn_.num_species() - 2; }
  // k_max / v^{o-1}: multiplies C(N, o) to give the total propensity of C'.
  double rate_scale() const;

  // Key of a sorted o-tuple of species ids.
  std::uint64_t key(const SpeciesId* sorted) const;
  std::uint64_t key(const Multiset& reactants) const;
  const Entry* lookup(std::uint64_t key) const;
  double total_rate(std::uint64_t key) const;
  // total + passive == k_max holds exactly in double arithmetic.
  double passive_rate(std::uint64_t key) const { return k_max_ - total_rate(key); }
  const std::unordered_map<std::uint64_t, Entry>& table() const { return table_; }

  Configuration embed(const Configuration& original, Count waste = 0) const;
  Configuration strip(const Configuration& extended) const;
  // Probability that a uniformly drawn o-subset of `extended` fires a real reaction.
  double nonpassive_probability(const Configuration& extended) const;

 private:
  Crn crn_;
  Volume v_;
  Count k0_;
  int o_ = 0;
  int g_ = 0;
  double k_max_ = 0.0;
  SpeciesId k_id_ = 0;
  SpeciesId w_id_ = 0;
  std::unordered_map<std::uint64_t, Entry> table_;
};

UniformizedCrn make_uniformly_reactive(const Crn& uniform, Volume v, Count k0);
UniformizedCrn uniformize(const Crn& crn, Volume v, Count k0);

struct SlowdownReport {
  double total_adjusted_propensity;  // sum of k' * prod C(c', r'), volume factor removed
  double max_adjusted_rate;          // k_max
  double slowdown;                   // S; 1/S = P(scheduler step is non-passive)
};

SlowdownReport slowdown_factor(const Crn& crn, const Configuration& c, Volume v);

}  // namespace crnbatch

#endif  // CRNBATCH_UNIFORMIZE_HPP
