#include "crnbatch/random.hpp"

#include <cmath>

#include "crnbatch/numeric.hpp"

namespace crnbatch {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t a = splitmix64(seed);
  std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  std::uint64_t c = splitmix64(b ^ splitmix64(index + 0x85157af5ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  eng_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform_pos() { return 1.0 - uniform(); }

Count Rng::below(Count n) { return std::uniform_int_distribution<Count>(0, n - 1)(eng_); }

double Rng::exponential(double rate) { return -std::log(uniform_pos()) / rate; }

double Rng::gamma(double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(eng_);
}

Count Rng::binomial(Count n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  return static_cast<Count>(std::binomial_distribution<long long>(static_cast<long long>(n), p)(eng_));
}

Count Rng::hypergeometric(Count total, Count good, Count draws) {
  if (draws == 0 || good == 0) return 0;
  if (good == total) return draws;
  if (draws == total) return good;
  if (draws > total - draws) return good - hypergeometric(total, good, total - draws);
  if (good > total - good) return draws - hypergeometric(total, total - good, draws);
  return hypergeometric_core(total, good, draws);
}

// good, draws <= total / 2, so the support is [0, min(good, draws)].
Count Rng::hypergeometric_core(Count total, Count good, Count draws) {
  if (draws <= 12) {
    Count x = 0, g = good, t = total;
    for (Count i = 0; i < draws; ++i, --t) {
      if (below(t) < g) {
        ++x;
        --g;
      }
    }
    return x;
  }
  const double N = static_cast<double>(total);
  const double K = static_cast<double>(good);
  const double m = static_cast<double>(draws);
  const Count upper = std::min(good, draws);
  Count mode = static_cast<Count>(std::floor((m + 1.0) * (K + 1.0) / (N + 2.0)));
  if (mode > upper) mode = upper;
  const double md = static_cast<double>(mode);
  const double log_pm = log_binom(K, md) + log_binom(N - K, m - md) - log_binom(N, m);
  const double pm = std::exp(log_pm);
  const double rest = N - K - m;  // may be negative only if draws > total - good
  for (;;) {
    double u = uniform();
    if (u < pm) return mode;
    u -= pm;
    Count lo = mode, hi = mode;
    double plo = pm, phi = pm;
    for (;;) {
      bool moved = false;
      if (hi < upper) {
        double x = static_cast<double>(hi);
        phi *= (K - x) * (m - x) / ((x + 1.0) * (rest + x + 1.0));
        ++hi;
        moved = true;
        u -= phi;
        if (u < 0.0) return hi;
      }
      if (lo > 0) {
        double x = static_cast<double>(lo);
        plo *= x * (rest + x) / ((K - x + 1.0) * (m - x + 1.0));
        --lo;
        moved = true;
        u -= plo;
        if (u < 0.0) return lo;
      }
      if (!moved || (phi == 0.0 && plo == 0.0)) break;  // rounding left mass unassigned; redraw
    }
  }
}

void Rng::multivariate_hypergeometric(const std::vector<Count>& counts, Count draws, std::vector<Count>& out) {
  out.assign(counts.size(), 0);
  Count total = 0;
  for (Count c : counts) total += c;
  for (std::size_t i = 0; i < counts.size() && draws > 0; ++i) {
    if (counts[i] == 0) continue;
    Count x = (counts[i] == total) ? draws : hypergeometric(total, counts[i], draws);
    out[i] = x;
    draws -= x;
    total -= counts[i];
  }
}

Streams Streams::from_seed(std::uint64_t seed, std::uint64_t trial) {
  return Streams{Rng(seed, 1, trial), Rng(seed, 2, trial)};
}

}  // namespace crnbatch
