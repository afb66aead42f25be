#ifndef CRNBATCH_HYPOEXP_HPP
#define CRNBATCH_HYPOEXP_HPP

#include <cstdint>
#include <vector>

#include "crnbatch/crn.hpp"
#include "crnbatch/random.hpp"

namespace crnbatch {

// Sum of k exponentials with rates rate_scale * C(n0 + i g, o), i = 0..k-1.
struct HypoexpSpec {
  Count n0 = 0;
  Count k = 0;
  int o = 1;
  int g = 0;
  double rate_scale = 1.0;

  double rate(Count i) const;
  std::vector<double> rates() const;
  bool operator==(const HypoexpSpec&) const = default;
};

void validate(const HypoexpSpec& spec);

struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double log_abs = 0.0;
  double value() const;
};

// C_i = prod_{j != i} lambda_j / (lambda_j - lambda_i); O(k^2), double precision per coefficient.
std::vector<SignedLog> hypoexp_coefficients(const HypoexpSpec& spec);
// Same values via the product tree of f(x) = prod (lambda_j - x) and multipoint
// evaluation of f'; multiprecision arithmetic with a self-checked precision.
std::vector<SignedLog> hypoexp_coefficients_fast(const HypoexpSpec& spec);
// Bits of working precision the fast path starts from.
unsigned fast_coefficient_precision_bits(const HypoexpSpec& spec);

// log sum_i C_i lambda_i exp(-lambda_i t); throws NumericUnderflow when the
// alternating sum cancels to nothing.
double hypoexp_logpdf(const HypoexpSpec& spec, const std::vector<SignedLog>& coeffs, double t);

// Closed forms for sum_{i<k} 1/C(n+ig, o) and sum_{i<k} 1/C(n+ig, o)^2.
double hypoexp_mean_closed(Count n, Count k, int o, int g);
double hypoexp_variance_closed(Count n, Count k, int o, int g);
double hypoexp_mean_direct(Count n, Count k, int o, int g);
double hypoexp_variance_direct(Count n, Count k, int o, int g);

struct HypoexpMoments {
  double mean = 0.0;
  double variance = 0.0;
  double delta = 0.0;  // (t_1 - t_k) / t_k of the per-stage mean times
  bool geometric = false;
};

// Moments of `spec` (rate_scale applied). Geometric-mean shortcut when delta < 0.1.
HypoexpMoments hypoexp_moments(const HypoexpSpec& spec, bool allow_geometric = true);

double sample_hypoexp_direct(const HypoexpSpec& spec, Rng& rng);
double sample_hypoexp_gamma_approx(const HypoexpSpec& spec, Rng& rng);
double sample_hypoexp_gamma_approx(const HypoexpSpec& spec, const HypoexpMoments& m, Rng& rng);

// Phase-type evaluation by uniformization: all terms nonnegative, so it stays
// accurate where the coefficient sum cancels.
class HypoexpDensity {
 public:
  explicit HypoexpDensity(const HypoexpSpec& spec);

  struct Value {
    double log_pdf;
    double slope;  // d/dt log pdf
  };
  Value eval(double t) const;
  double log_survival(double t) const;
  // log P(stage i is running at time t), i = 0..k-1.
  std::vector<double> log_occupancy(double t) const;
  const HypoexpSpec& spec() const { return spec_; }

 private:
  struct Sums {
    double log_last;
    double log_prev;
    double log_all;
  };
  Sums sums(double t) const;

  HypoexpSpec spec_;
  std::vector<double> rates_;
  double top_ = 0.0;
};

// Adaptive rejection sampler for the (log-concave) hypoexponential density.
class ArsEnvelope {
 public:
  ArsEnvelope() = default;
  explicit ArsEnvelope(const HypoexpSpec& spec);

  bool initialized() const { return initialized_; }
  const HypoexpSpec& spec() const { return spec_; }
  std::size_t num_points() const { return xs_.size(); }
  std::uint64_t evaluations() const { return evaluations_; }
  double sample(Rng& rng);

 private:
  void add_point(double x, double h, double d);
  void rebuild();
  double upper(std::size_t piece, double x) const;
  double lower(double x) const;

  bool initialized_ = false;
  HypoexpSpec spec_;
  std::vector<HypoexpDensity> density_;  // zero or one element
  std::vector<double> xs_, hs_, ds_;
  std::vector<double> z_;          // piece boundaries, z_[0] = 0, z_.back() = inf
  std::vector<double> log_mass_;   // per piece
  std::vector<double> cum_mass_;   // normalized cumulative
  std::uint64_t evaluations_ = 0;
};

double sample_hypoexp_exact(const HypoexpSpec& spec, ArsEnvelope& envelope, Rng& rng);

struct EndOfRun {
  Count reactions = 0;         // stages completed before the deadline
  std::vector<double> times;   // cumulative completion times of those stages
  std::uint64_t rejections = 0;
};

// Conditioned on the whole batch overrunning `remaining`, the number of stages
// finished in time; restarts whenever all k stages fit.
EndOfRun sample_end_of_run(const HypoexpSpec& spec, double remaining, Rng& rng,
                           std::uint64_t rejection_cap = 10000);
// Stage count only, drawn from the stage occupancy at `remaining`; no rejection.
Count sample_end_of_run_exact(const HypoexpSpec& spec, double remaining, Rng& rng);

}  // namespace crnbatch

#endif  // CRNBATCH_HYPOEXP_HPP
