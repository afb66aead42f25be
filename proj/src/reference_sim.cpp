#include "crnbatch/reference_sim.hpp"

#include <algorithm>

#include "crnbatch/errors.hpp"

namespace crnbatch {

Checkpoints Checkpoints::evenly(double end, std::uint64_t count) {
  Checkpoints cp;
  for (std::uint64_t i = 1; i <= count; ++i) cp.marks.push_back(end * static_cast<double>(i) / count);
  return cp;
}

namespace {

std::size_t select_reaction(const Configuration& c, Volume v, const Crn& crn, double total, Rng& rng) {
  const auto& rs = crn.reactions();
  double u = rng.uniform() * total;
  std::size_t last = rs.size();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double p = propensity(c, v, rs[i]);
    if (p <= 0.0) continue;
    last = i;
    if (u < p) return i;
    u -= p;
  }
  return last;  // rounding at the top end
}

}  // namespace

void gillespie_step(SimState& s, const Crn& crn, Volume v, Rng& rng, Rng& time_rng) {
  const double total = total_propensity(s.config, v, crn);
  if (!(total > 0.0)) throw Terminal("no applicable reaction");
  s.time += time_rng.exponential(total);
  apply_in_place(s.config, crn.reactions()[select_reaction(s.config, v, crn, total, rng)]);
  ++s.steps;
}

void gillespie_step(SimState& s, const Crn& crn, Volume v, Rng& rng) { gillespie_step(s, crn, v, rng, rng); }

std::vector<TrajectoryRecord> gillespie_run(const Configuration& c0, const Crn& crn, Volume v, Stop stop,
                                            const Checkpoints& checkpoints, Streams& streams) {
  std::vector<TrajectoryRecord> out;
  SimState s{c0, 0.0, 0};
  out.push_back({0, 0.0, c0, 0.0, false, false});
  std::size_t mark = 0;
  const auto& marks = checkpoints.marks;

  if (stop.kind == Stop::Kind::Steps) {
    if (stop.steps == 0) return out;
    while (s.steps < stop.steps) {
      const double total = total_propensity(s.config, v, crn);
      if (!(total > 0.0)) {
        // terminal: remaining steps are self-transitions
        for (; mark < marks.size() && marks[mark] < static_cast<double>(stop.steps); ++mark)
          if (marks[mark] > static_cast<double>(s.steps))
            out.push_back({static_cast<std::uint64_t>(marks[mark]), s.time, s.config, 0.0, false, true});
        s.steps = stop.steps;
        out.push_back({s.steps, s.time, s.config, 0.0, false, true});
        return out;
      }
      s.time += streams.time.exponential(total);
      apply_in_place(s.config, crn.reactions()[select_reaction(s.config, v, crn, total, streams.reactions)]);
      ++s.steps;
      for (; mark < marks.size() && marks[mark] <= static_cast<double>(s.steps); ++mark)
        if (marks[mark] < static_cast<double>(stop.steps) && marks[mark] > 0.0)
          out.push_back({s.steps, s.time, s.config, 0.0, false, false});
    }
    out.push_back({s.steps, s.time, s.config, 0.0, false, false});
    return out;
  }

  const double t_end = stop.time;
  if (!(t_end > 0.0)) return out;
  auto emit_until = [&](double t_next) {
    for (; mark < marks.size() && marks[mark] < t_next; ++mark)
      if (marks[mark] < t_end && marks[mark] > 0.0)
        out.push_back({s.steps, marks[mark], s.config, 0.0, false, false});
  };
  for (;;) {
    const double total = total_propensity(s.config, v, crn);
    if (!(total > 0.0)) {
      emit_until(t_end);
      out.push_back({s.steps, t_end, s.config, 0.0, false, true});
      return out;
    }
    const double dt = streams.time.exponential(total);
    if (s.time + dt > t_end) {
      emit_until(t_end);
      out.push_back({s.steps, t_end, s.config, 0.0, false, false});
      return out;
    }
    emit_until(s.time + dt);
    s.time += dt;
    apply_in_place(s.config, crn.reactions()[select_reaction(s.config, v, crn, total, streams.reactions)]);
    ++s.steps;
  }
}

void draw_reactants(const Configuration& c, int o, Rng& rng, std::vector<SpeciesId>& out) {
  out.clear();
  Count remaining = c.n();
  if (remaining < static_cast<Count>(o)) throw PopulationTooSmall("population below order");
  std::vector<Count> taken(c.size(), 0);
  for (int d = 0; d < o; ++d, --remaining) {
    Count r = rng.below(remaining);
    for (std::size_t i = 0; i < c.size(); ++i) {
      Count avail = c[i] - taken[i];
      if (r < avail) {
        ++taken[i];
        out.push_back(static_cast<SpeciesId>(i));
        break;
      }
      r -= avail;
    }
  }
  std::sort(out.begin(), out.end());
}

ReactionOutcome scheduler_step(SimState& s, const UniformizedCrn& u, Rng& rng) {
  std::vector<SpeciesId> picked;
  draw_reactants(s.config, u.order(), rng, picked);
  ReactionOutcome res;
  if (const UniformizedCrn::Entry* e = u.lookup(u.key(picked.data()))) {
    double x = rng.uniform() * u.k_max();
    for (const Channel& ch : e->channels) {
      if (x < ch.rate) {
        res.passive = false;
        res.reaction = ch.reaction;
        break;
      }
      x -= ch.rate;
    }
  } else {
    rng.uniform();  // keep stream consumption independent of the multiset
  }
  if (!res.passive) {
    apply_in_place(s.config, u.crn().reactions()[res.reaction]);
    ++s.steps;
  }
  s.config[u.waste()] = 0;
  return res;
}

}  // namespace crnbatch
