#include "crnbatch/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace crnbatch {
namespace {

double stirling_tail(double x) {
  double r = 1.0 / x;
  double r2 = r * r;
  return r * (1.0 / 12.0 -
              r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0)))));
}

}  // namespace

double lgamma_diff(double a, double b) {
  if (a == b) return 0.0;
  if (std::min(a, b) < 20.0) return std::lgamma(a) - std::lgamma(b);
  double d = a - b;
  return (a - 0.5) * std::log1p(d / b) + d * (std::log(b) - 1.0) + (stirling_tail(a) - stirling_tail(b));
}

double log_falling(double x, double m) { return lgamma_diff(x + 1.0, x - m + 1.0); }

double log_binom(double n, double k) { return log_falling(n, k) - std::lgamma(k + 1.0); }

double binom(std::uint64_t n, int k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0.0;
  long double r = 1.0L;
  for (int j = 0; j < k; ++j) r = r * static_cast<long double>(n - j) / (j + 1);
  return static_cast<double>(r);
}

long double binom_diff(std::uint64_t a, std::uint64_t b, int k) {
  // Exact in 128-bit integers when C(a,k) stays below ~1e36.
  auto exact = [k](std::uint64_t n, bool& ok) {
    unsigned __int128 r = 1;
    for (int j = 0; j < k; ++j) {
      if (n < static_cast<std::uint64_t>(j)) return static_cast<unsigned __int128>(0);
      unsigned __int128 next = r * (n - j);
      if (r != 0 && next / r != (n - j)) {
        ok = false;
        return static_cast<unsigned __int128>(0);
      }
      r = next / (j + 1);
    }
    return r;
  };
  bool ok = true;
  {
    unsigned __int128 ca = exact(a, ok);
    unsigned __int128 cb = exact(b, ok);
    if (ok) {
      if (ca >= cb) return static_cast<long double>(ca - cb);
      return -static_cast<long double>(cb - ca);
    }
  }
  long double ca = 1.0L, cb = 1.0L;
  for (int j = 0; j < k; ++j) {
    ca = ca * static_cast<long double>(a - j) / (j + 1);
    cb = cb * static_cast<long double>(b - j) / (j + 1);
  }
  return ca - cb;
}

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace crnbatch
