#include "crnbatch/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crnbatch/errors.hpp"
#include "crnbatch/numeric.hpp"
#include "crnbatch/parser.hpp"

namespace crnbatch {

double total_rate_constant(const Crn& crn, const Multiset& reactants) {
  Multiset r = make_multiset(reactants);
  double s = 0.0;
  for (const Reaction& a : crn.reactions())
    if (a.reactants == r) s += a.rate;
  return s;
}

double adjusted_rate_constant(const Reaction& a, int o, Count k0, Volume v) {
  const auto ord = static_cast<long long>(a.order());
  if (o < ord) throw InvalidParams("target order below reaction order");
  const auto d = static_cast<Count>(o - ord);
  if (k0 < d) throw K0TooSmall("k0 smaller than the number of added catalysts");
  long double num = a.rate, den = 1.0L;
  for (Count t = 0; t < d; ++t) {
    num *= static_cast<long double>(v.v) * static_cast<long double>(t + 1);
    den *= static_cast<long double>(k0 - t);
  }
  return static_cast<double>(num / den);
}

Crn make_uniform(const Crn& crn, Volume v, Count k0) {
  for (const Species& s : crn.species())
    if (s.name == kCatalystName || s.name == kWasteName)
      throw ReservedSpeciesName("species name " + s.name + " is reserved");
  OrderGenerativity og = order_and_generativity(crn);
  const int o = std::max(og.o, 1);
  const int g = std::max(og.g, 0);

  Crn out;
  for (const Species& s : crn.species()) out.add_species(s.name);
  const SpeciesId kid = out.add_species(std::string(kCatalystName));
  const SpeciesId wid = out.add_species(std::string(kWasteName));
  for (const Reaction& a : crn.reactions()) {
    const Count dord = static_cast<Count>(o) - a.order();
    const Count dgen = static_cast<Count>(g - a.generativity());
    Multiset r = a.reactants, p = a.products;
    r.push_back({kid, dord});
    p.push_back({kid, dord});
    p.push_back({wid, dgen});
    out.add_reaction(Reaction(std::move(r), std::move(p), adjusted_rate_constant(a, o, k0, v)));
  }
  return out;
}

UniformizedCrn::UniformizedCrn(Crn uniform, Volume v, Count k0) : crn_(std::move(uniform)), v_(v), k0_(k0) {
  auto kid = crn_.find(std::string(kCatalystName));
  auto wid = crn_.find(std::string(kWasteName));
  if (!kid || !wid) throw InvalidParams("uniform CRN lacks __K/__W species");
  k_id_ = *kid;
  w_id_ = *wid;
  OrderGenerativity og = order_and_generativity(crn_);
  o_ = og.o;
  g_ = og.g;
  for (const Reaction& a : crn_.reactions()) {
    if (static_cast<int>(a.order()) != o_ || a.generativity() != g_)
      throw InvalidParams("CRN is not uniform");
    if (coefficient(a.reactants, w_id_) != 0) throw InvalidParams("__W may not be a reactant");
  }
  if (o_ < 1 || g_ < 0) throw InvalidParams("uniform CRN needs order >= 1 and generativity >= 0");
  const double base = static_cast<double>(crn_.num_species());
  if (std::pow(base, o_) >= 1.8e19) throw InvalidParams("too many species for this order");

  for (std::uint32_t i = 0; i < crn_.reactions().size(); ++i) {
    const Reaction& a = crn_.reactions()[i];
    Entry& e = table_[key(a.reactants)];
    e.channels.push_back({i, a.rate});
    e.total += a.rate;
  }
  for (const auto& [k, e] : table_) k_max_ = std::max(k_max_, e.total);
  // Even last mantissa bit: then (k_max - t) + t rounds back to k_max for every t <= k_max.
  // The extra ulp, if any, is passive.
  int exp = 0;
  const double mant = std::frexp(k_max_, &exp);
  if (std::fmod(std::ldexp(mant, std::numeric_limits<double>::digits), 2.0) != 0.0)
    k_max_ = std::nextafter(k_max_, std::numeric_limits<double>::infinity());
}

double UniformizedCrn::rate_scale() const { return k_max_ / std::pow(v_.v, o_ - 1); }

std::uint64_t UniformizedCrn::key(const SpeciesId* sorted) const {
  std::uint64_t k = 0;
  const std::uint64_t base = crn_.num_species();
  for (int i = 0; i < o_; ++i) k = k * base + sorted[i];
  return k;
}

std::uint64_t UniformizedCrn::key(const Multiset& reactants) const {
  std::vector<SpeciesId> flat;
  for (const Term& t : reactants)
    for (Count j = 0; j < t.coeff; ++j) flat.push_back(t.species);
  if (static_cast<int>(flat.size()) != o_) throw InvalidParams("reactant multiset has wrong order");
  return key(flat.data());
}

const UniformizedCrn::Entry* UniformizedCrn::lookup(std::uint64_t k) const {
  auto it = table_.find(k);
  return it == table_.end() ? nullptr : &it->second;
}

double UniformizedCrn::total_rate(std::uint64_t k) const {
  const Entry* e = lookup(k);
  return e ? e->total : 0.0;
}

Configuration UniformizedCrn::embed(const Configuration& original, Count waste) const {
  if (original.size() != num_original_species()) throw InvalidParams("configuration size mismatch");
  Configuration c(crn_.num_species());
  std::copy(original.counts.begin(), original.counts.end(), c.counts.begin());
  c[k_id_] = k0_;
  c[w_id_] = waste;
  return c;
}

Configuration UniformizedCrn::strip(const Configuration& extended) const {
  Configuration c(num_original_species());
  for (std::size_t i = 0, j = 0; i < extended.size(); ++i)
    if (i != k_id_ && i != w_id_) c[j++] = extended[i];
  return c;
}

double UniformizedCrn::nonpassive_probability(const Configuration& extended) const {
  // Real weight: sum_r totalrate(r) * prod_A C(c(A), r(A)); total weight: k_max * C(N, o).
  double real = 0.0;
  for (const Reaction& a : crn_.reactions()) {
    double w = a.rate;
    for (const Term& t : a.reactants) w *= binom(extended[t.species], static_cast<int>(t.coeff));
    real += w;
  }
  const double all = k_max_ * binom(extended.n(), o_);
  return all > 0.0 ? real / all : 0.0;
}

UniformizedCrn make_uniformly_reactive(const Crn& uniform, Volume v, Count k0) {
  return UniformizedCrn(uniform, v, k0);
}

UniformizedCrn uniformize(const Crn& crn, Volume v, Count k0) {
  return UniformizedCrn(make_uniform(crn, v, k0), v, k0);
}

SlowdownReport slowdown_factor(const Crn& crn, const Configuration& c, Volume v) {
  const Count n = c.n();
  OrderGenerativity og = order_and_generativity(crn);
  if (n < static_cast<Count>(std::max(og.o, 1))) throw PopulationTooSmall("population below CRN order");
  UniformizedCrn u = uniformize(crn, v, n);
  Configuration ext = u.embed(c);
  double total = 0.0;
  for (const Reaction& a : u.crn().reactions()) {
    double w = a.rate;
    for (const Term& t : a.reactants) w *= binom(ext[t.species], static_cast<int>(t.coeff));
    total += w;
  }
  SlowdownReport rep{total, u.k_max(), std::numeric_limits<double>::infinity()};
  if (total <= 0.0) throw ZeroPropensity("terminal configuration: slowdown is infinite");
  rep.slowdown = u.k_max() * binom(ext.n(), u.order()) / total;
  return rep;
}

}  // namespace crnbatch
