#include "crnbatch/collision.hpp"

#include <algorithm>
#include <cmath>

#include "crnbatch/errors.hpp"
#include "crnbatch/numeric.hpp"

namespace crnbatch {
namespace {

void validate(const CollisionRunParams& p) {
  if (p.o < 1 || p.g < 0) throw InvalidParams("collision run needs o >= 1 and g >= 0");
  if (p.r > p.n) throw InvalidParams("red count exceeds population");
  if (p.n > kMaxCollisionPopulation) throw InvalidParams("population exceeds 1e10 cap");
}

}  // namespace

double multifactorial_log(Count x, Count g) {
  if (x < 1 || g < 1) throw InvalidParams("multifactorial needs x >= 1 and g >= 1");
  const Count m = (x - 1) / g + 1;  // number of positive terms
  const double xg = static_cast<double>(x) / static_cast<double>(g);
  return static_cast<double>(m) * std::log(static_cast<double>(g)) + lgamma_diff(xg + 1.0, xg + 1.0 - m);
}

double coll_log_ccdf(const CollisionRunParams& p, Count k) {
  validate(p);
  if (k == 0) return 0.0;
  const Count green = p.n - p.r;
  if (k > green / static_cast<Count>(p.o)) return -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  CompensatedSum sum;
  // green molecules consumed: (n-r)!/(n-r-ko)!
  sum.add(log_falling(static_cast<double>(green), kd * p.o));
  // o-subsets of the growing population: prod_j prod_{i<k} (n + g i - j)
  for (int j = 0; j < p.o; ++j) {
    const double base = static_cast<double>(p.n) - j;
    if (p.g == 0) {
      sum.add(-kd * std::log(base));
    } else {
      const double gd = static_cast<double>(p.g);
      sum.add(-(kd * std::log(gd) + lgamma_diff(base / gd + kd, base / gd)));
    }
  }
  return std::min(sum.value(), 0.0);
}

Count sample_coll(const CollisionRunParams& p, Rng& rng, Count cap) {
  validate(p);
  Count hi = (p.n - p.r) / static_cast<Count>(p.o);
  if (cap < hi) hi = cap;
  if (hi == 0) return 0;
  const double log_u = std::log(rng.uniform_pos());
  if (coll_log_ccdf(p, hi) >= log_u) return hi;
  Count lo = 0;  // invariant: ccdf(lo) >= u > ccdf(hi)
  while (hi - lo > 1) {
    Count mid = lo + (hi - lo) / 2;
    if (coll_log_ccdf(p, mid) >= log_u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::pair<double, double> coll_expectation_bounds(Count n, int o, int g) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double og = static_cast<double>(o) * (o + g);
  double lower = rn * (1.0 - std::exp(-og)) / og;
  if (n < static_cast<Count>(o)) lower = 0.0;  // empty support beyond 0
  return {lower, 2.0 * rn};
}

}  // namespace crnbatch
