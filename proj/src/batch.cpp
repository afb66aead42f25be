#include "crnbatch/batch.hpp"

#include <algorithm>
#include <cmath>

#include "crnbatch/collision.hpp"
#include "crnbatch/errors.hpp"
#include "crnbatch/numeric.hpp"

namespace crnbatch {

TransitionTensor sample_transition_tensor(const Configuration& c, Count l, int o, Rng& rng) {
  TransitionTensor t;
  if (o < 1) throw InvalidParams("order must be positive");
  if (static_cast<Count>(o) * l > c.n()) throw InsufficientPopulation("batch needs more molecules than present");
  if (l == 0) return t;

  struct Group {
    std::vector<SpeciesId> prefix;
    Count count;
  };
  std::vector<Group> groups{{{}, l}}, next;
  std::vector<Count> remaining = c.counts, level, avail, split;
  for (int j = 0; j < o; ++j) {
    // species of the j-th reactant across all l tuples, then their assignment to prefixes
    rng.multivariate_hypergeometric(remaining, l, level);
    for (std::size_t s = 0; s < remaining.size(); ++s) remaining[s] -= level[s];
    avail = level;
    next.clear();
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const Group& grp = groups[gi];
      if (gi + 1 == groups.size()) {
        split = avail;
      } else {
        rng.multivariate_hypergeometric(avail, grp.count, split);
      }
      for (std::size_t s = 0; s < split.size(); ++s) {
        if (split[s] == 0) continue;
        avail[s] -= split[s];
        Group g2{grp.prefix, split[s]};
        g2.prefix.push_back(static_cast<SpeciesId>(s));
        next.push_back(std::move(g2));
      }
    }
    groups.swap(next);
  }

  for (Group& grp : groups) std::sort(grp.prefix.begin(), grp.prefix.end());
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.prefix < b.prefix; });
  for (Group& grp : groups) {
    if (!t.entries.empty() && t.entries.back().tuple == grp.prefix) {
      t.entries.back().count += grp.count;
    } else {
      t.entries.push_back({std::move(grp.prefix), grp.count});
    }
  }
  t.total = l;
  return t;
}

Multiset sample_collision_reactants(const Configuration& green, const Configuration& red, int o, Rng& rng) {
  const Count G = green.n();
  const Count R = red.n();
  if (R == 0) throw NoRedMolecules("collision requires a red molecule");
  if (G + R < static_cast<Count>(o)) throw InsufficientPopulation("too few molecules for a collision");

  // number of red reactants j >= 1, weight C(R, j) C(G, o - j)
  std::vector<double> logw(o + 1, -INFINITY);
  double top = -INFINITY;
  for (int j = 1; j <= o; ++j) {
    if (static_cast<Count>(j) > R || static_cast<Count>(o - j) > G) continue;
    logw[j] = log_binom(static_cast<double>(R), j) + log_binom(static_cast<double>(G), o - j);
    top = std::max(top, logw[j]);
  }
  double total = 0.0;
  for (int j = 1; j <= o; ++j) total += std::exp(logw[j] - top);
  double u = rng.uniform() * total;
  int j = o;
  for (int i = 1; i <= o; ++i) {
    double w = std::exp(logw[i] - top);
    if (w > 0.0) j = i;
    if (u < w) break;
    u -= w;
  }

  std::vector<Count> from_red, from_green;
  rng.multivariate_hypergeometric(red.counts, static_cast<Count>(j), from_red);
  rng.multivariate_hypergeometric(green.counts, static_cast<Count>(o - j), from_green);
  std::vector<Term> terms;
  for (std::size_t s = 0; s < red.size(); ++s) {
    Count x = from_red[s] + from_green[s];
    if (x) terms.push_back({static_cast<SpeciesId>(s), x});
  }
  return make_multiset(std::move(terms));
}

namespace {

void add_scaled(Configuration& c, const Multiset& m, Count times) {
  for (const Term& t : m) c[t.species] += t.coeff * times;
}

}  // namespace

BatchOutcome execute_batch(const UniformizedCrn& u, const Configuration& c, Count max_reactions, Rng& rng) {
  const int o = u.order();
  const int g = u.generativity();
  const Count n = c.n();
  if (n < static_cast<Count>(o)) throw InsufficientPopulation("population below order");
  BatchOutcome out;
  if (max_reactions == 0) {
    out.new_config = c;
    return out;
  }

  const Count l = sample_coll({n, 0, o, g}, rng, max_reactions);
  out.collided = l < max_reactions;
  TransitionTensor tensor = sample_transition_tensor(c, l, o, rng);

  Configuration green = c;
  Configuration red(c.size());
  const auto& reactions = u.crn().reactions();
  for (const TensorEntry& e : tensor.entries) {
    for (SpeciesId s : e.tuple) green[s] -= e.count;
    Count left = e.count;
    if (const UniformizedCrn::Entry* ent = u.lookup(u.key(e.tuple.data()))) {
      double rate_left = u.k_max();
      for (const Channel& ch : ent->channels) {
        if (left == 0) break;
        double p = rate_left > 0.0 ? ch.rate / rate_left : 1.0;
        Count x = rng.binomial(left, std::min(p, 1.0));
        rate_left -= ch.rate;
        left -= x;
        out.steps_executed += x;
        add_scaled(red, reactions[ch.reaction].products, x);
      }
    }
    // passive: reactants re-emitted together with g waste molecules
    for (SpeciesId s : e.tuple) red[s] += left;
    red[u.waste()] += left * static_cast<Count>(g);
    out.passive_count += left;
  }

  Configuration merged = green;
  for (std::size_t s = 0; s < merged.size(); ++s) merged[s] += red[s];
  if (out.collided) {
    Multiset picked = sample_collision_reactants(green, red, o, rng);
    bool real = false;
    if (const UniformizedCrn::Entry* ent = u.lookup(u.key(picked))) {
      double x = rng.uniform() * u.k_max();
      for (const Channel& ch : ent->channels) {
        if (x < ch.rate) {
          apply_in_place(merged, reactions[ch.reaction]);
          real = true;
          break;
        }
        x -= ch.rate;
      }
    } else {
      rng.uniform();
    }
    if (real) {
      ++out.steps_executed;
    } else {
      merged[u.waste()] += static_cast<Count>(g);
      ++out.passive_count;
    }
  }
  out.new_config = std::move(merged);
  return out;
}

}  // namespace crnbatch
