#include "crnbatch/validation.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "crnbatch/errors.hpp"

namespace crnbatch {

unsigned default_threads() {
  if (const char* env = std::getenv("CRNBATCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Histogram endpoint_histogram(const TrialRunner& runner, std::uint64_t trials, unsigned threads) {
  if (trials < 1) throw InvalidParams("need at least one trial");
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
  Histogram total;
  if (threads == 1) {
    for (std::uint64_t i = 0; i < trials; ++i) ++total[runner(i)];
    return total;
  }
  std::atomic<std::uint64_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      Histogram local;
      try {
        for (std::uint64_t i; (i = next.fetch_add(1)) < trials;) ++local[runner(i)];
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
      std::lock_guard lock(mu);
      for (const auto& [k, c] : local) total[k] += c;
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return total;
}

std::uint64_t histogram_total(const Histogram& h) {
  std::uint64_t t = 0;
  for (const auto& [k, c] : h) t += c;
  return t;
}

double histogram_mean(const Histogram& h) {
  const std::uint64_t t = histogram_total(h);
  if (t == 0) return 0.0;
  long double s = 0;
  for (const auto& [k, c] : h) s += static_cast<long double>(k) * c;
  return static_cast<double>(s / t);
}

namespace {

std::uint64_t count_at(const Histogram& h, std::int64_t k) {
  auto it = h.find(k);
  return it == h.end() ? 0 : it->second;
}

std::vector<std::int64_t> union_keys(const Histogram& a, const Histogram& b) {
  std::set<std::int64_t> keys;
  for (const auto& [k, c] : a) keys.insert(k);
  for (const auto& [k, c] : b) keys.insert(k);
  return {keys.begin(), keys.end()};
}

double chi2_sf(double stat, int dof) {
  if (dof <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

}  // namespace

ChiSquareResult chisq_compare(const Histogram& a, const Histogram& b, double min_expected) {
  const double na = static_cast<double>(histogram_total(a)), nb = static_cast<double>(histogram_total(b));
  if (na == 0.0 || nb == 0.0) throw DegenerateBins("empty histogram");
  const double fa = na / (na + nb), fb = nb / (na + nb);

  std::vector<std::pair<double, double>> bins;
  double ca = 0.0, cb = 0.0;
  for (std::int64_t k : union_keys(a, b)) {
    ca += static_cast<double>(count_at(a, k));
    cb += static_cast<double>(count_at(b, k));
    const double pooled = ca + cb;
    if (pooled * fa >= min_expected && pooled * fb >= min_expected) {
      bins.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(ca, cb);
    } else {
      bins.back().first += ca;
      bins.back().second += cb;
    }
  }
  ChiSquareResult r;
  r.bins = bins.size();
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  for (const auto& [x, y] : bins) {
    const double d = ka * x - kb * y;
    r.statistic += d * d / (x + y);
  }
  r.dof = static_cast<int>(bins.size()) - 1;
  r.p_value = chi2_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult chisq_goodness(const Histogram& observed, const std::map<std::int64_t, double>& probs,
                               double min_expected) {
  const double n = static_cast<double>(histogram_total(observed));
  if (n == 0.0 || probs.empty()) throw DegenerateBins("empty histogram");
  std::set<std::int64_t> keys;
  for (const auto& [k, p] : probs) keys.insert(k);
  for (const auto& [k, c] : observed) keys.insert(k);
  std::vector<std::pair<double, double>> bins;  // observed, expected
  double o = 0.0, e = 0.0;
  for (std::int64_t k : keys) {
    o += static_cast<double>(count_at(observed, k));
    auto it = probs.find(k);
    e += it == probs.end() ? 0.0 : n * it->second;
    if (e >= min_expected) {
      bins.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  if (o + e > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(o, e);
    } else {
      bins.back().first += o;
      bins.back().second += e;
    }
  }
  ChiSquareResult r;
  r.bins = bins.size();
  for (const auto& [x, m] : bins) {
    if (m <= 0.0) {
      r.statistic = x > 0.0 ? INFINITY : r.statistic;
      continue;
    }
    r.statistic += (x - m) * (x - m) / m;
  }
  r.dof = static_cast<int>(bins.size()) - 1;
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi2_sf(r.statistic, r.dof);
  return r;
}

double tvd(const Histogram& a, const Histogram& b) {
  const double na = static_cast<double>(histogram_total(a)), nb = static_cast<double>(histogram_total(b));
  if (na == 0.0 || nb == 0.0) throw DegenerateBins("empty histogram");
  double s = 0.0;
  for (std::int64_t k : union_keys(a, b))
    s += std::fabs(static_cast<double>(count_at(a, k)) / na - static_cast<double>(count_at(b, k)) / nb);
  return 0.5 * s;
}

double ks_statistic(const Histogram& a, const Histogram& b) {
  const double na = static_cast<double>(histogram_total(a)), nb = static_cast<double>(histogram_total(b));
  if (na == 0.0 || nb == 0.0) throw DegenerateBins("empty histogram");
  double fa = 0.0, fb = 0.0, d = 0.0;
  for (std::int64_t k : union_keys(a, b)) {
    fa += static_cast<double>(count_at(a, k)) / na;
    fb += static_cast<double>(count_at(b, k)) / nb;
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

std::vector<double> passive_fraction_series(const std::vector<TrajectoryRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.passive_fraction);
  return out;
}

std::vector<BenchRow> scaling_bench(const std::function<void(Count, const std::string&)>& run,
                                    const std::vector<Count>& sizes, const std::vector<std::string>& methods,
                                    int repeats) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (Count n : sizes) {
    for (const std::string& m : methods) {
      double best = INFINITY;
      for (int r = 0; r < std::max(repeats, 1); ++r) {
        const auto start = clock::now();
        run(n, m);
        best = std::min(best, std::chrono::duration<double>(clock::now() - start).count());
      }
      rows.push_back({n, m, best});
    }
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParams("slope needs two or more points");
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / m;
    my += std::log(y[i]) / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace crnbatch
