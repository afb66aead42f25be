#ifndef CRNBATCH_CRN_HPP
#define CRNBATCH_CRN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crnbatch {

using Count = std::uint64_t;
using SpeciesId = std::uint32_t;

struct Term {
  SpeciesId species;
  Count coeff;
  bool operator==(const Term&) const = default;
};

// Sparse stoichiometric vector, sorted by species with no zero entries.
using Multiset = std::vector<Term>;

Multiset make_multiset(std::vector<Term> terms);
Count multiset_size(const Multiset& m);
Count coefficient(const Multiset& m, SpeciesId s);

struct Species {
  SpeciesId id;
  std::string name;
  bool operator==(const Species&) const = default;
};

struct Reaction {
  Multiset reactants;
  Multiset products;
  double rate = 1.0;

  Reaction() = default;
  Reaction(Multiset r, Multiset p, double k);

  Count order() const { return multiset_size(reactants); }
  std::int64_t generativity() const {
    return static_cast<std::int64_t>(multiset_size(products)) - static_cast<std::int64_t>(order());
  }
  bool operator==(const Reaction&) const = default;
};

class Crn {
 public:
  Crn() = default;

  SpeciesId add_species(const std::string& name);
  // Returns the existing id when the name is already registered.
  SpeciesId intern(const std::string& name);
  std::optional<SpeciesId> find(const std::string& name) const;
  void add_reaction(Reaction r);

  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  std::size_t num_species() const { return species_.size(); }
  const std::string& name(SpeciesId id) const { return species_.at(id).name; }

  bool operator==(const Crn&) const = default;

 private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
};

struct Configuration {
  std::vector<Count> counts;

  Configuration() = default;
  explicit Configuration(std::size_t q) : counts(q, 0) {}
  explicit Configuration(std::vector<Count> c) : counts(std::move(c)) {}

  Count n() const;
  std::size_t size() const { return counts.size(); }
  Count& operator[](std::size_t i) { return counts[i]; }
  Count operator[](std::size_t i) const { return counts[i]; }
  bool operator==(const Configuration&) const = default;
};

struct Volume {
  double v;
  explicit Volume(double value);
};

struct OrderGenerativity {
  int o;
  int g;
};

double propensity(const Configuration& c, Volume v, const Reaction& a);
double total_propensity(const Configuration& c, Volume v, const Crn& crn);
bool applicable(const Configuration& c, const Reaction& a);
Configuration apply(const Configuration& c, const Reaction& a);
void apply_in_place(Configuration& c, const Reaction& a);
OrderGenerativity order_and_generativity(const Crn& crn);

std::string format_reaction(const Crn& crn, const Reaction& a);

}  // namespace crnbatch

#endif  // CRNBATCH_CRN_HPP
