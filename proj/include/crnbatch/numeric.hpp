#ifndef CRNBATCH_NUMERIC_HPP
#define CRNBATCH_NUMERIC_HPP

#include <cstdint>

namespace crnbatch {

// log Gamma(a) - log Gamma(b), accurate when a and b are large and close.
double lgamma_diff(double a, double b);
// log of x (x-1) ... (x-m+1)
double log_falling(double x, double m);
double log_binom(double n, double k);
// C(n, k) as a double (exact while it fits in 53 bits).
double binom(std::uint64_t n, int k);
// C(a, k) - C(b, k) without catastrophic cancellation for nearby a, b.
long double binom_diff(std::uint64_t a, std::uint64_t b, int k);

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace crnbatch

#endif  // CRNBATCH_NUMERIC_HPP
