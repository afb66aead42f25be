#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "crnbatch/collision.hpp"
#include "crnbatch/errors.hpp"
#include "crnbatch/parser.hpp"
#include "crnbatch/simulate.hpp"
#include "crnbatch/uniformize.hpp"
#include "crnbatch/validation.hpp"

using namespace crnbatch;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << x;
  return os.str();
}

struct ModelArgs {
  std::string crn_path;
  std::string init;
  double volume = 1.0;
};

void add_model_options(CLI::App* app, ModelArgs& m, bool need_init = true) {
  app->add_option("--crn", m.crn_path, "reaction network file")->required()->check(CLI::ExistingFile);
  auto* init = app->add_option("--init", m.init, "initial counts, e.g. \"A=100, B=50\"");
  if (!need_init) init->description("initial counts (sets the default k0)");
  app->add_option("--volume", m.volume, "volume v > 0")->check(CLI::PositiveNumber);
}

struct RunArgs {
  std::string method = "batch";
  double time = -1.0;
  std::uint64_t steps = 0;
  std::string time_sampler = "exact";
  double p = 0.0;
  bool pad = false, no_pad = false;
  Count direct_below = 64;
};

void add_run_options(CLI::App* app, RunArgs& r, CLI::Option** time_opt, CLI::Option** steps_opt,
                     const std::string& time_flag, const std::string& steps_flag) {
  *time_opt = app->add_option(time_flag, r.time, "simulate until this time")->check(CLI::NonNegativeNumber);
  *steps_opt = app->add_option(steps_flag, r.steps, "simulate this many reactions");
  (*time_opt)->excludes(*steps_opt);
  app->add_option("--time-sampler", r.time_sampler, "batch duration sampler")
      ->check(CLI::IsMember({"exact", "gamma", "direct"}));
  app->add_option("--p", r.p, "batching exponent in (0, 1/2]")->check(CLI::Range(1e-9, 0.5));
  auto* pad = app->add_flag("--pad", r.pad, "pad with waste to power-of-two buckets");
  app->add_flag("--no-pad", r.no_pad, "never pad with waste")->excludes(pad);
  app->add_option("--direct-below", r.direct_below, "exact sampler: sum exponentials below this many stages");
}

SimulationOptions make_options(const RunArgs& r, const std::string& method) {
  SimulationOptions o;
  o.method = parse_method(method);
  o.stop = r.time >= 0.0 ? Stop::at_time(r.time) : Stop::at_steps(r.steps);
  o.time_sampler = parse_time_sampler(r.time_sampler);
  if (r.p > 0.0) o.p = r.p;
  if (r.pad) o.pad = true;
  if (r.no_pad) o.pad = false;
  o.direct_below = r.direct_below;
  return o;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

void write_csv(std::ostream& os, const Crn& crn, const RunResult& res) {
  os << "step,time,passive_fraction";
  for (const auto& s : crn.species()) os << ',' << s.name;
  os << '\n';
  for (const auto& r : res.records) {
    os << r.step << ',' << format_double(r.time) << ',' << format_double(r.passive_fraction);
    for (Count x : r.config.counts) os << ',' << x;
    os << '\n';
  }
}

void write_json(std::ostream& os, const Crn& crn, const RunResult& res, const nlohmann::json& meta) {
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : res.records) {
    nlohmann::ordered_json row;
    row["step"] = r.step;
    row["time"] = r.time;
    row["passive_fraction"] = r.passive_fraction;
    row["coarse"] = r.coarse;
    row["terminal"] = r.terminal;
    nlohmann::ordered_json counts;
    for (const auto& s : crn.species()) counts[s.name] = r.config[s.id];
    row["counts"] = counts;
    rows.push_back(row);
  }
  doc["records"] = rows;
  os << doc.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batched exact stochastic simulation of chemical reaction networks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // simulate
  ModelArgs sim_model;
  RunArgs sim_run;
  std::uint64_t seed = 0, checkpoints = 0;
  std::string output = "-", format = "csv";
  bool no_timestamps = false;
  CLI::Option *sim_time = nullptr, *sim_steps = nullptr;
  auto* sim = app.add_subcommand("simulate", "simulate one trajectory");
  add_model_options(sim, sim_model);
  add_run_options(sim, sim_run, &sim_time, &sim_steps, "--time", "--steps");
  sim->add_option("--method", sim_run.method, "batch | gillespie | auto")
      ->check(CLI::IsMember({"batch", "gillespie", "auto"}));
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--checkpoints", checkpoints,
                  "evenly spaced records; a batch run reports each at the next batch boundary");
  sim->add_option("--output", output, "output path, - for stdout");
  sim->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sim->add_flag("--no-timestamps", no_timestamps, "step-limited batch runs: skip duration sampling");

  // transform
  ModelArgs tr_model;
  Count k0 = 0;
  auto* tr = app.add_subcommand("transform", "print the uniformized network");
  add_model_options(tr, tr_model, false);
  tr->add_option("--k0", k0, "catalyst count (default: n of --init, at least the order)");

  // compare
  ModelArgs cmp_model;
  RunArgs cmp_run;
  std::uint64_t trials = 10000, cmp_seed = 0;
  unsigned threads = 0;
  std::string species, methods = "batch,gillespie", hist_out;
  CLI::Option *cmp_time = nullptr, *cmp_steps = nullptr;
  auto* cmp = app.add_subcommand("compare", "compare endpoint distributions of two or more methods");
  add_model_options(cmp, cmp_model);
  add_run_options(cmp, cmp_run, &cmp_time, &cmp_steps, "--at-time", "--at-steps");
  cmp->add_option("--trials", trials, "trials per method")->check(CLI::PositiveNumber);
  cmp->add_option("--species", species, "observed species")->required();
  cmp->add_option("--methods", methods, "comma separated; batch, gillespie, auto, or batch:<sampler>");
  cmp->add_option("--seed", cmp_seed, "random seed");
  cmp->add_option("--threads", threads, "worker threads (default: CRNBATCH_THREADS or all cores)");
  cmp->add_option("--histogram-out", hist_out, "write histograms as CSV");

  // bench
  ModelArgs b_model;
  RunArgs b_run;
  std::string sizes, b_methods = "batch,gillespie";
  int repeats = 1;
  std::uint64_t b_seed = 0;
  CLI::Option *b_time = nullptr, *b_steps = nullptr;
  auto* bench = app.add_subcommand("bench", "wall time versus population size");
  add_model_options(bench, b_model);
  add_run_options(bench, b_run, &b_time, &b_steps, "--time", "--steps");
  bench->add_option("--sizes", sizes, "comma separated population sizes")->required();
  bench->add_option("--methods", b_methods, "comma separated methods");
  bench->add_option("--repeats", repeats, "best of this many runs")->check(CLI::PositiveNumber);
  bench->add_option("--seed", b_seed, "random seed");

  // dist coll (hidden)
  auto* dist = app.add_subcommand("dist", "")->group("");
  dist->require_subcommand(1);
  CollisionRunParams cp;
  std::uint64_t samples = 10000, d_seed = 0;
  auto* coll = dist->add_subcommand("coll", "sample the collision-free run length");
  coll->add_option("--n", cp.n)->required();
  coll->add_option("--r", cp.r);
  coll->add_option("--o", cp.o)->required();
  coll->add_option("--g", cp.g)->required();
  coll->add_option("--samples", samples);
  coll->add_option("--seed", d_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      if (!*sim_time && !*sim_steps) throw CLI::RequiredError("--time or --steps");
      const std::string text = read_file(sim_model.crn_path);
      const Crn crn = parse_crn(text);
      const Configuration c0 = parse_config(sim_model.init, crn);
      const Volume v{sim_model.volume};
      SimulationOptions opt = make_options(sim_run, sim_run.method);
      opt.timestamps = !no_timestamps;
      Streams streams = Streams::from_seed(seed);
      const double end = opt.stop.kind == Stop::Kind::Time ? opt.stop.time : static_cast<double>(opt.stop.steps);
      const RunResult res = simulate(crn, v, c0, opt, streams, Checkpoints::evenly(end, checkpoints));
      std::ofstream file;
      if (output != "-") {
        file.open(output);
        if (!file) throw Error("cannot write '" + output + "'");
      }
      std::ostream& os = output == "-" ? std::cout : file;
      if (format == "csv") {
        write_csv(os, crn, res);
      } else {
        nlohmann::ordered_json meta;
        meta["seed"] = seed;
        meta["method"] = sim_run.method;
        meta["time_sampler"] = sim_run.time_sampler;
        meta["crn_hash"] = hex(fnv1a(serialize_crn(crn)));
        meta["volume"] = sim_model.volume;
        meta["version"] = kVersion;
        meta["batches"] = res.stats.batches;
        meta["passive"] = res.stats.passive;
        meta["real"] = res.stats.real;
        write_json(os, crn, res, meta);
      }
      return 0;
    }

    if (*tr) {
      const Crn crn = parse_crn(read_file(tr_model.crn_path));
      const Volume v{tr_model.volume};
      Count k = k0;
      if (k == 0 && !tr_model.init.empty()) k = parse_config(tr_model.init, crn).n();
      k = std::max<Count>(k, static_cast<Count>(std::max(order_and_generativity(crn).o, 1)));
      const UniformizedCrn u = uniformize(crn, v, k);
      std::cout << "# k_max = " << format_double(u.k_max()) << "\n# k0 = " << k << "\n" << serialize_crn(u.crn());
      return 0;
    }

    if (*cmp) {
      if (!*cmp_time && !*cmp_steps) throw CLI::RequiredError("--at-time or --at-steps");
      const Crn crn = parse_crn(read_file(cmp_model.crn_path));
      const Configuration c0 = parse_config(cmp_model.init, crn);
      const Volume v{cmp_model.volume};
      const auto sid = crn.find(species);
      if (!sid) throw UnknownSpecies("unknown species '" + species + "'");
      std::vector<std::string> names = split_list(methods);
      if (names.size() < 2) throw InvalidParams("--methods needs at least two entries");
      std::vector<Histogram> hists;
      for (std::size_t mi = 0; mi < names.size(); ++mi) {
        RunArgs r = cmp_run;
        std::string m = names[mi];
        if (auto colon = m.find(':'); colon != std::string::npos) {
          r.time_sampler = m.substr(colon + 1);
          m = m.substr(0, colon);
        }
        SimulationOptions opt = make_options(r, m);
        opt.timestamps = false;
        hists.push_back(endpoint_histogram(
            [&, opt, mi](std::uint64_t i) {
              Streams s = Streams::from_seed(cmp_seed + 1000003 * mi, i);
              return static_cast<std::int64_t>(simulate(crn, v, c0, opt, s).final().config[*sid]);
            },
            trials, threads));
      }
      std::cout << "method,trials,mean,chisq_vs_first,p_value,dof,tvd,ks\n";
      for (std::size_t mi = 0; mi < names.size(); ++mi) {
        std::cout << names[mi] << ',' << histogram_total(hists[mi]) << ',' << format_double(histogram_mean(hists[mi]));
        if (mi == 0) {
          std::cout << ",,,,,\n";
          continue;
        }
        const ChiSquareResult cs = chisq_compare(hists[0], hists[mi]);
        std::cout << ',' << format_double(cs.statistic) << ',' << format_double(cs.p_value) << ',' << cs.dof << ','
                  << format_double(tvd(hists[0], hists[mi])) << ',' << format_double(ks_statistic(hists[0], hists[mi]))
                  << '\n';
      }
      if (!hist_out.empty()) {
        std::ofstream out(hist_out);
        out << "method,count,frequency\n";
        for (std::size_t mi = 0; mi < names.size(); ++mi)
          for (const auto& [k, c] : hists[mi]) out << names[mi] << ',' << k << ',' << c << '\n';
      }
      return 0;
    }

    if (*bench) {
      if (!*b_time && !*b_steps) throw CLI::RequiredError("--time or --steps");
      const Crn crn = parse_crn(read_file(b_model.crn_path));
      const Configuration base = parse_config(b_model.init, crn);
      if (base.n() == 0) throw InvalidParams("--init must be nonempty for bench");
      std::vector<Count> ns;
      for (const std::string& s : split_list(sizes)) ns.push_back(static_cast<Count>(std::stod(s)));
      const std::vector<std::string> ms = split_list(b_methods);
      auto rows = scaling_bench(
          [&](Count n, const std::string& m) {
            const double f = static_cast<double>(n) / static_cast<double>(base.n());
            Configuration c(base.size());
            for (std::size_t i = 0; i < base.size(); ++i) c[i] = static_cast<Count>(std::llround(base[i] * f));
            Streams s = Streams::from_seed(b_seed, n);
            simulate(crn, Volume{b_model.volume * f}, c, make_options(b_run, m), s);
          },
          ns, ms, repeats);
      std::cout << "n,method,seconds\n";
      for (const auto& r : rows) std::cout << r.n << ',' << r.method << ',' << format_double(r.seconds) << '\n';
      if (ns.size() >= 2) {
        for (const std::string& m : ms) {
          std::vector<double> xs, ys;
          for (const auto& r : rows)
            if (r.method == m) {
              xs.push_back(static_cast<double>(r.n));
              ys.push_back(std::max(r.seconds, 1e-9));
            }
          std::cout << "# slope " << m << ' ' << format_double(loglog_slope(xs, ys)) << '\n';
        }
      }
      return 0;
    }

    if (*coll) {
      Rng rng(d_seed, 3);
      Histogram h;
      for (std::uint64_t i = 0; i < samples; ++i) ++h[static_cast<std::int64_t>(sample_coll(cp, rng))];
      double ks = 0.0, emp = 0.0;
      const double total = static_cast<double>(samples);
      std::uint64_t seen = 0;
      for (const auto& [k, c] : h) {
        // empirical Pr[l >= k] against the analytic CCDF at each observed value
        emp = 1.0 - static_cast<double>(seen) / total;
        ks = std::max(ks, std::fabs(emp - std::exp(coll_log_ccdf(cp, static_cast<Count>(k)))));
        seen += c;
        const double after = 1.0 - static_cast<double>(seen) / total;
        ks = std::max(ks, std::fabs(after - std::exp(coll_log_ccdf(cp, static_cast<Count>(k) + 1))));
      }
      const auto [lo, hi] = coll_expectation_bounds(cp.n, cp.o, cp.g);
      std::cout << "mean,lower_bound,upper_bound,ks\n"
                << format_double(histogram_mean(h)) << ',' << format_double(lo) << ',' << format_double(hi) << ','
                << format_double(ks) << '\n';
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
