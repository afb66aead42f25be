#include "crnbatch/crn.hpp"

#include <algorithm>
#include <limits>

#include "crnbatch/errors.hpp"
#include "crnbatch/parser.hpp"

namespace crnbatch {

Multiset make_multiset(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.species < b.species; });
  Multiset out;
  for (const Term& t : terms) {
    if (t.coeff == 0) continue;
    if (!out.empty() && out.back().species == t.species) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  return out;
}

Count multiset_size(const Multiset& m) {
  Count s = 0;
  for (const Term& t : m) s += t.coeff;
  return s;
}

Count coefficient(const Multiset& m, SpeciesId s) {
  for (const Term& t : m)
    if (t.species == s) return t.coeff;
  return 0;
}

Reaction::Reaction(Multiset r, Multiset p, double k)
    : reactants(make_multiset(std::move(r))), products(make_multiset(std::move(p))), rate(k) {
  if (!(k > 0.0)) throw NonPositiveRate("rate constant must be positive");
}

SpeciesId Crn::add_species(const std::string& name) {
  if (find(name)) throw InvalidParams("duplicate species " + name);
  auto id = static_cast<SpeciesId>(species_.size());
  species_.push_back({id, name});
  return id;
}

SpeciesId Crn::intern(const std::string& name) {
  if (auto id = find(name)) return *id;
  return add_species(name);
}

std::optional<SpeciesId> Crn::find(const std::string& name) const {
  for (const Species& s : species_)
    if (s.name == name) return s.id;
  return std::nullopt;
}

void Crn::add_reaction(Reaction r) {
  for (const Term& t : r.reactants)
    if (t.species >= species_.size()) throw InvalidParams("reaction references unknown species");
  for (const Term& t : r.products)
    if (t.species >= species_.size()) throw InvalidParams("reaction references unknown species");
  if (!(r.rate > 0.0)) throw NonPositiveRate("rate constant must be positive");
  reactions_.push_back(std::move(r));
}

Count Configuration::n() const {
  Count s = 0;
  for (Count x : counts) s += x;
  return s;
}

Volume::Volume(double value) : v(value) {
  if (!(value > 0.0)) throw InvalidParams("volume must be positive");
}

double propensity(const Configuration& c, Volume v, const Reaction& a) {
  double p = a.rate;
  bool first = true;
  for (const Term& t : a.reactants) {
    Count have = c[t.species];
    if (have < t.coeff) return 0.0;
    for (Count j = 0; j < t.coeff; ++j) {
      p *= static_cast<double>(have - j) / static_cast<double>(j + 1);
      if (!first) p /= v.v;
      first = false;
    }
  }
  // order 0: k / v^{-1}
  if (first) p *= v.v;
  return p;
}

double total_propensity(const Configuration& c, Volume v, const Crn& crn) {
  double s = 0.0;
  for (const Reaction& a : crn.reactions()) s += propensity(c, v, a);
  return s;
}

bool applicable(const Configuration& c, const Reaction& a) {
  for (const Term& t : a.reactants)
    if (c[t.species] < t.coeff) return false;
  return true;
}

void apply_in_place(Configuration& c, const Reaction& a) {
  if (!applicable(c, a)) throw NotApplicable("insufficient reactants");
  for (const Term& t : a.reactants) c[t.species] -= t.coeff;
  for (const Term& t : a.products) c[t.species] += t.coeff;
}

Configuration apply(const Configuration& c, const Reaction& a) {
  Configuration out = c;
  apply_in_place(out, a);
  return out;
}

OrderGenerativity order_and_generativity(const Crn& crn) {
  if (crn.reactions().empty()) throw EmptyCrn("CRN has no reactions");
  int o = 0;
  int g = std::numeric_limits<int>::min();
  for (const Reaction& a : crn.reactions()) {
    o = std::max<int>(o, static_cast<int>(a.order()));
    g = std::max<int>(g, static_cast<int>(a.generativity()));
  }
  return {o, g};
}

std::string format_reaction(const Crn& crn, const Reaction& a) { return serialize_reaction(crn, a); }

}  // namespace crnbatch
